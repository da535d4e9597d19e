#pragma once

// JSON renderings of verdicts and reports; every top-level report carries
// "schema": 1.

#include <string>
#include <vector>

#include <json.hpp>

#include "fairsub/composition.hpp"
#include "fairsub/discriminator.hpp"
#include "fairsub/explore.hpp"
#include "fairsub/lts.hpp"
#include "fairsub/qm.hpp"
#include "fairsub/refinement.hpp"
#include "fairsub/syntax.hpp"

namespace fairsub {

using json = nlohmann::json;

inline constexpr int kSchemaVersion = 1;

inline json words_json(const std::vector<LabelWord>& ws) {
  json a = json::array();
  for (const auto& w : ws) a.push_back(to_string(w));
  return a;
}

inline json to_json(const WfReport& r) {
  json v = json::array();
  for (const auto& x : r.violations) v.push_back({{"condition", x.condition}, {"state", x.state}, {"message", x.message}});
  return {{"ok", r.ok}, {"violations", v}};
}

inline json to_json(const ExplorationBounds& b) {
  return {{"queue_bound", b.max_queue_length}, {"state_cap", b.max_states}, {"node_cap", b.max_derived_nodes}};
}

inline json to_json(const GameBounds& b) { return {{"max_pairs", b.max_pairs}, {"node_cap", b.node_cap}}; }

inline json to_json(const ConvergeBounds& b) {
  return {{"max_len", b.max_len}, {"max_depth", b.max_depth}, {"node_cap", b.node_cap}};
}

inline json evidence_json(const Verdict& v) {
  json e = json::object();
  if (v.outcome == Outcome::No) {
    json path = json::array();
    for (const auto& s : v.path) path.push_back(to_string(s));
    e = {{"path", path}, {"state", v.state}, {"trail", v.trail}};
  }
  if (v.outcome == Outcome::Unknown) e["reason"] = v.reason;
  return e;
}

inline json to_json(const Verdict& v, const ExplorationBounds& b) {
  return {{"schema", kSchemaVersion},
          {"verdict", to_string(v.outcome)},
          {"evidence", evidence_json(v)},
          {"bounds", to_json(b)},
          {"stats", {{"states_explored", v.states_explored}}}};
}

inline json pair_json(const SessionType& s, const SessionType& t) { return json::array({to_string(s), to_string(t)}); }

inline json to_json(const GameVerdict& g) {
  json j = {{"outcome", to_string(g.outcome)}, {"pairs_explored", g.pairs_explored}};
  if (g.outcome == Outcome::Yes) {
    json w = json::array();
    for (const auto& [s, t] : g.witness) w.push_back(pair_json(s, t));
    j["witness"] = w;
  }
  if (g.violation) {
    const auto& x = *g.violation;
    j["violation"] = {{"pair", pair_json(x.left, x.right)},
                      {"clause", x.clause},
                      {"label", x.label ? to_string(*x.label) : std::string()},
                      {"path", to_string(x.path)},
                      {"message", x.message}};
  }
  if (!g.exhausted.empty()) j["exhausted"] = g.exhausted;
  return j;
}

inline json to_json(const ConvOption& o) {
  return {{"psi", to_string(o.psi)}, {"tag", o.tag.str()}, {"result", o.result}, {"node", o.node}};
}

inline json to_json(const ConvergenceVerdict& c) {
  json nodes = json::array();
  for (const auto& n : c.nodes) {
    json j = {{"pair", pair_json(n.left, n.right)},
              {"depth", n.depth},
              {"outcome", to_string(n.outcome)},
              {"rule", n.rule},
              {"saturated", n.saturated}};
    if (!n.handled.empty()) {
      json h = json::array();
      for (const auto& [phi, o] : n.handled) h.push_back({{"trace", to_string(phi)}, {"option", to_json(o)}});
      j["handled"] = h;
    }
    if (n.outcome == Outcome::No && n.rule == "rule") {
      json opts = json::array();
      for (const auto& o : n.refutation) opts.push_back(to_json(o));
      j["refuted"] = to_string(n.refuted);
      j["options"] = opts;
    }
    if (!n.reason.empty()) j["reason"] = n.reason;
    nodes.push_back(j);
  }
  json j = {{"outcome", to_string(c.outcome)}, {"saturated", c.saturated}, {"nodes", nodes}};
  if (!c.reason.empty()) j["reason"] = c.reason;
  return j;
}

inline json to_json(const FairVerdict& v, const FairParams& p) {
  json ev = {{"game", to_json(v.game)}};
  if (v.convergence) ev["convergence"] = to_json(*v.convergence);
  if (v.failing_pair) ev["failing_pair"] = pair_json(v.failing_pair->first, v.failing_pair->second);
  if (!v.reason.empty()) ev["reason"] = v.reason;
  return {{"schema", kSchemaVersion},
          {"verdict", to_string(v.outcome)},
          {"leg", v.leg},
          {"saturated", v.saturated},
          {"evidence", ev},
          {"bounds", {{"game", to_json(p.game)}, {"converge", to_json(p.converge)}}},
          {"stats", {{"pairs_explored", v.game.pairs_explored}, {"pairs_converged", v.pairs_converged}}}};
}

inline json to_json(const AuditReport& a) {
  return {{"closed", a.closed}, {"exact", a.exact}, {"pairs", a.pairs}, {"failures", a.failures}, {"flagged", a.flagged}};
}

inline json to_json(const AssistedReport& r) {
  return {{"audit", to_json(r.audit)},
          {"contains_root", r.contains_root},
          {"sampled", r.sampled},
          {"converged", r.converged},
          {"problems", r.problems},
          {"certified", r.certified}};
}

inline json to_json(const DiscriminatorResult& d) {
  json log = json::array();
  for (const auto& s : d.log)
    log.push_back({{"pair", json::array({s.left, s.right})},
                   {"rule", s.rule},
                   {"sent", s.sent},
                   {"recursed", s.recursed},
                   {"grafted", s.grafted},
                   {"notes", s.notes}});
  return {{"partner", to_string(d.partner)}, {"truncated", d.truncated}, {"log", log}};
}

inline json to_json(const DiscriminatorValidation& v) {
  return {{"with_right", {{"verdict", to_string(v.with_right.outcome)}, {"evidence", evidence_json(v.with_right)}}},
          {"with_left", {{"verdict", to_string(v.with_left.outcome)}, {"evidence", evidence_json(v.with_left)}}},
          {"separates", v.separates}};
}

inline json to_json(const QmRun& r) {
  return {{"result", r.accepted ? "Accepted" : "Unknown"}, {"steps", r.steps}, {"state", r.state}, {"queue", r.queue}};
}

}  // namespace fairsub
