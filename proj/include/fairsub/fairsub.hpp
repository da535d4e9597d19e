#pragma once

#include "fairsub/errors.hpp"
#include "fairsub/label.hpp"
#include "fairsub/graph.hpp"
#include "fairsub/syntax.hpp"
#include "fairsub/parser.hpp"
#include "fairsub/lts.hpp"
#include "fairsub/explore.hpp"
#include "fairsub/configurations.hpp"
#include "fairsub/composition.hpp"
#include "fairsub/refinement.hpp"
#include "fairsub/discriminator.hpp"
#include "fairsub/qm.hpp"
#include "fairsub/corpus.hpp"
#include "fairsub/report.hpp"
