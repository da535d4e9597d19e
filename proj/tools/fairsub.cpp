#include <filesystem>
#include <fstream>
#include <iomanip>
#include <iostream>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "fairsub/fairsub.hpp"

using namespace fairsub;

namespace {

constexpr int kExitUsage = 64;
constexpr int kExitData = 65;

int exit_code(Outcome o) {
  switch (o) {
    case Outcome::Yes: return 0;
    case Outcome::No: return 1;
    case Outcome::Unknown: return 2;
  }
  return 2;
}

std::string read_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw Error("cannot open " + path);
  std::stringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

SessionType load_type(const std::string& path) {
  try {
    return parse_system(read_file(path));
  } catch (const ParseError& e) {
    throw Error(path + ":" + e.what());
  }
}

void print_json(const json& j) { std::cout << j.dump(2) << "\n"; }

void print_verdict(const Verdict& v) {
  std::cout << to_string(v.outcome) << "\n";
  if (v.outcome == Outcome::No) {
    std::cout << "stuck: " << v.state << "\n";
    for (std::size_t i = 0; i < v.path.size(); ++i) std::cout << "  " << to_string(v.path[i]) << "\n";
  }
  if (v.outcome == Outcome::Unknown) std::cout << "reason: " << v.reason << "\n";
  std::cout << "states explored: " << v.states_explored << "\n";
}

void print_convergence(const ConvergenceVerdict& c) {
  for (std::size_t i = 0; i < c.nodes.size(); ++i) {
    const auto& n = c.nodes[i];
    std::cout << "  [" << i << "] " << to_string(n.outcome) << " by " << n.rule << ": " << to_string(n.left) << "  vs  "
              << to_string(n.right) << "\n";
    if (n.outcome == Outcome::No && n.rule == "rule") {
      std::cout << "      refuted trace: " << to_string(n.refuted) << "\n";
      for (const auto& o : n.refutation)
        std::cout << "      option psi=" << to_string(o.psi) << " !" << o.tag.str() << ": " << o.result << "\n";
    }
    if (!n.reason.empty()) std::cout << "      " << n.reason << "\n";
  }
}

struct Bounds {
  std::size_t queue_bound = 6;
  std::size_t state_cap = 10000;
  std::size_t node_cap = kDefaultNodeCap;
  std::size_t max_pairs = 4096;
  std::size_t max_len = 12;
  std::size_t max_depth = 6;
  bool exhaustive = false;

  void add(CLI::App* c, bool explore, bool refine) {
    if (explore) {
      c->add_option("--queue-bound", queue_bound, "Maximum queue length")->capture_default_str();
      c->add_option("--state-cap", state_cap, "Maximum explored states")->capture_default_str();
    }
    c->add_option("--node-cap", node_cap, "Maximum nodes of a derived type")->capture_default_str();
    if (refine) {
      c->add_option("--max-pairs", max_pairs, "Subtyping game pair budget")->capture_default_str();
      c->add_option("--max-len,-L", max_len, "Convergence trace length bound")->capture_default_str();
      c->add_option("--max-depth,-D", max_depth, "Convergence derivation depth bound")->capture_default_str();
    }
    c->add_flag("--exhaustive", exhaustive, "Raise every cap tenfold");
  }
  std::size_t scale() const { return exhaustive ? 10 : 1; }
  ExplorationBounds explore() const {
    return {queue_bound * scale(), state_cap * scale(), node_cap * scale()};
  }
  GameBounds game() const { return {max_pairs * scale(), node_cap * scale()}; }
  ConvergeBounds converge() const {
    ConvergeBounds b;
    b.max_len = max_len;
    b.max_depth = max_depth;
    b.node_cap = node_cap * scale();
    b.max_trie *= scale();
    return b;
  }
};

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"fairsub: asynchronous session type workbench"};
  app.require_subcommand(1);
  app.fallthrough();
  bool as_json = false;
  app.add_flag("--json", as_json, "Emit JSON reports");

  std::string a_path, b_path;
  Bounds bounds;
  int rc = 0;

  auto two_types = [&](CLI::App* c) {
    c->add_option("left", a_path, "Left/sub type file")->required();
    c->add_option("right", b_path, "Right/super type file")->required();
  };

  bool lenient = false;
  auto* wf = app.add_subcommand("wf", "Check well-formedness");
  wf->add_option("file", a_path)->required();
  wf->add_flag("--lenient", lenient, "Report mixed choices and duplicate tags instead of rejecting them");
  wf->callback([&] {
    ParseOptions opt;
    opt.strict = !lenient;
    ParsedSystem sys;
    try {
      sys = parse_system_full(read_file(a_path), opt);
    } catch (const ParseError& e) {
      throw Error(a_path + ":" + e.what());
    }
    WfReport r = check_well_formed(sys.root);
    for (const auto& i : sys.issues) r.add(i.condition, i.state, i.message);
    if (as_json) {
      auto j = to_json(r);
      j["schema"] = kSchemaVersion;
      print_json(j);
    } else {
      std::cout << (r.ok ? "well-formed" : "ill-formed") << "\n";
      for (const auto& v : r.violations) std::cout << "  condition " << v.condition << ": " << v.message << "\n";
    }
    rc = r.ok ? 0 : 1;
  });

  auto* du = app.add_subcommand("dual", "Print the dual type");
  du->add_option("file", a_path)->required();
  du->callback([&] {
    auto d = dual(load_type(a_path));
    if (as_json)
      print_json({{"schema", kSchemaVersion}, {"dual", to_string(d)}});
    else
      std::cout << print_system(d);
  });

  auto* lt = app.add_subcommand("lts", "List the transitions of a type");
  lt->add_option("file", a_path)->required();
  bounds.add(lt, false, false);
  lt->callback([&] {
    auto t = load_type(a_path);
    json arr = json::array();
    for (const auto& [l, next] : transitions(t, bounds.node_cap * bounds.scale())) {
      if (as_json)
        arr.push_back({{"label", to_string(l)}, {"target", to_string(next)}});
      else
        std::cout << to_string(l) << "  ->  " << to_string(next) << "\n";
    }
    if (as_json) print_json({{"schema", kSchemaVersion}, {"transitions", arr}});
  });

  std::size_t trace_len = 6;
  auto* tr = app.add_subcommand("traces", "Enumerate terminated traces up to a length");
  tr->add_option("file", a_path)->required();
  tr->add_option("--max-len", trace_len)->capture_default_str();
  tr->callback([&] {
    auto ws = traces_up_to(load_type(a_path), trace_len);
    if (as_json) {
      print_json({{"schema", kSchemaVersion}, {"traces", words_json(ws)}});
    } else {
      for (const auto& w : ws) std::cout << to_string(w) << "\n";
    }
  });

  std::string word;
  auto* de = app.add_subcommand("deriv", "Derivative along a label word, e.g. \"?a !b\"");
  de->add_option("file", a_path)->required();
  de->add_option("word", word)->required();
  bounds.add(de, false, false);
  de->callback([&] {
    auto t = load_type(a_path);
    LabelWord w;
    try {
      w = parse_word(word);
    } catch (const Error& e) {
      throw CLI::ValidationError("word", e.what());
    }
    try {
      auto d = derivative_word(t, w, bounds.node_cap * bounds.scale());
      if (as_json)
        print_json({{"schema", kSchemaVersion}, {"derivative", to_string(d.type)}});
      else
        std::cout << print_system(d.type);
    } catch (const NotEnabled& e) {
      if (as_json)
        print_json({{"schema", kSchemaVersion}, {"error", e.what()}});
      else
        std::cout << "not enabled: " << e.what() << "\n";
      rc = 1;
    }
  });

  auto* co = app.add_subcommand("compliant", "Bounded compliance under the queue semantics");
  two_types(co);
  bounds.add(co, true, false);
  co->callback([&] {
    auto v = compliant_bounded(load_type(a_path), load_type(b_path), bounds.explore());
    as_json ? print_json(to_json(v, bounds.explore())) : print_verdict(v);
    rc = exit_code(v.outcome);
  });

  auto* cr = app.add_subcommand("correct", "Bounded correctness under the queue-less semantics");
  two_types(cr);
  bounds.add(cr, true, false);
  cr->callback([&] {
    auto v = correct_bounded(load_type(a_path), load_type(b_path), bounds.explore());
    as_json ? print_json(to_json(v, bounds.explore())) : print_verdict(v);
    rc = exit_code(v.outcome);
  });

  auto* cc = app.add_subcommand("crosscheck", "Compare the two semantics on a pair");
  two_types(cc);
  bounds.add(cc, true, false);
  cc->callback([&] {
    auto r = cross_check_semantics(load_type(a_path), load_type(b_path), bounds.explore());
    if (as_json) {
      print_json({{"schema", kSchemaVersion},
                  {"status", to_string(r.status)},
                  {"compliant", to_json(r.compliant, bounds.explore())},
                  {"correct", to_json(r.correct, bounds.explore())}});
    } else {
      std::cout << to_string(r.status) << "\ncompliant: ";
      print_verdict(r.compliant);
      std::cout << "correct: ";
      print_verdict(r.correct);
    }
    rc = r.status == CrossStatus::Agree ? 0 : r.status == CrossStatus::Disagree ? 1 : 2;
  });

  bool game_only = false, converge_only = false;
  auto* su = app.add_subcommand("subtype", "Fair refinement: subtyping game plus convergence");
  two_types(su);
  bounds.add(su, false, true);
  auto* g_opt = su->add_flag("--game-only", game_only, "Run only the subtyping game");
  su->add_flag("--converge-only", converge_only, "Run only convergence on the root pair")->excludes(g_opt);
  su->callback([&] {
    auto s = load_type(a_path), t = load_type(b_path);
    if (game_only) {
      auto g = subtyping_game(s, t, bounds.game());
      if (as_json) {
        auto j = to_json(g);
        j["schema"] = kSchemaVersion;
        print_json(j);
      } else {
        std::cout << to_string(g.outcome) << "\npairs explored: " << g.pairs_explored << "\n";
        if (g.violation) std::cout << "clause " << g.violation->clause << ": " << g.violation->message << "\n";
        for (const auto& [x, y] : g.witness) std::cout << "  (" << to_string(x) << ", " << to_string(y) << ")\n";
        if (!g.exhausted.empty()) std::cout << "exhausted: " << g.exhausted << "\n";
      }
      rc = exit_code(g.outcome);
      return;
    }
    if (converge_only) {
      auto c = converge_bounded(s, t, bounds.converge());
      if (as_json) {
        auto j = to_json(c);
        j["schema"] = kSchemaVersion;
        print_json(j);
      } else {
        std::cout << to_string(c.outcome) << (c.outcome == Outcome::Yes && !c.saturated ? " (within bounds)" : "") << "\n";
        print_convergence(c);
      }
      rc = exit_code(c.outcome);
      return;
    }
    FairParams p{bounds.game(), bounds.converge()};
    auto v = fair_subtype(s, t, p);
    if (as_json) {
      print_json(to_json(v, p));
    } else {
      std::cout << to_string(v.outcome) << (v.outcome == Outcome::Yes && !v.saturated ? " (within bounds)" : "")
                << "\ndecided by: " << v.leg << "\n";
      std::cout << "game: " << to_string(v.game.outcome) << ", " << v.game.pairs_explored << " pairs\n";
      if (v.game.violation) std::cout << "clause " << v.game.violation->clause << ": " << v.game.violation->message << "\n";
      if (v.failing_pair)
        std::cout << "failing pair: " << to_string(v.failing_pair->first) << "  vs  " << to_string(v.failing_pair->second)
                  << "\n";
      if (v.convergence && v.outcome == Outcome::No) print_convergence(*v.convergence);
      if (!v.reason.empty()) std::cout << "reason: " << v.reason << "\n";
    }
    rc = exit_code(v.outcome);
  });

  auto* cv = app.add_subcommand("converge", "Bounded convergence check");
  two_types(cv);
  bounds.add(cv, false, true);
  cv->callback([&] {
    auto c = converge_bounded(load_type(a_path), load_type(b_path), bounds.converge());
    if (as_json) {
      auto j = to_json(c);
      j["schema"] = kSchemaVersion;
      j["bounds"] = to_json(bounds.converge());
      print_json(j);
    } else {
      std::cout << to_string(c.outcome) << (c.outcome == Outcome::Yes && !c.saturated ? " (within bounds)" : "") << "\n";
      print_convergence(c);
    }
    rc = exit_code(c.outcome);
  });

  int sample = 8;
  auto* au = app.add_subcommand("audit", "Audit a (parametric) relation file and certify its pairs");
  au->add_option("relation", a_path, "Relation file (.pairs)")->required();
  au->add_option("--sample", sample, "Instantiate n = 0..N")->capture_default_str();
  bounds.add(au, false, true);
  au->callback([&] {
    RelationFile rel;
    try {
      rel = parse_relation_file(read_file(a_path));
    } catch (const ParseError& e) {
      throw Error(a_path + ":" + e.what());
    }
    auto roots = instantiate(rel, {0});
    if (roots.empty()) throw Error(a_path + ": no relation lines");
    auto r = certify_with_relation(roots.front().first, roots.front().second, rel, sample, bounds.converge());
    if (as_json) {
      auto j = to_json(r);
      j["schema"] = kSchemaVersion;
      print_json(j);
    } else {
      std::cout << (r.certified ? "certified up to bounds" : "not certified") << "\n";
      std::cout << "pairs audited: " << r.audit.pairs << (r.audit.closed ? ", closed" : ", NOT closed")
                << (r.audit.exact ? "" : " (frontier flagged)") << "\n";
      for (const auto& f : r.audit.failures) std::cout << "  failure: " << f << "\n";
      for (const auto& f : r.audit.flagged) std::cout << "  frontier: " << f << "\n";
      std::cout << "convergence: " << r.converged << "/" << r.sampled << " pairs\n";
      for (const auto& p : r.problems) std::cout << "  " << p << "\n";
    }
    rc = r.certified ? 0 : r.audit.closed ? 2 : 1;
  });

  std::size_t depth = 32;
  auto* di = app.add_subcommand("discriminate", "Build and validate a partner separating the left type from the right");
  two_types(di);
  di->add_option("--depth", depth, "Unfolding depth bound")->capture_default_str();
  bounds.add(di, true, true);
  di->callback([&] {
    auto s = load_type(a_path), t = load_type(b_path);
    auto d = build_discriminator(s, t, depth, bounded_oracle(bounds.converge()), bounds.node_cap * bounds.scale());
    auto v = validate_discriminator(d.partner, s, t, bounds.explore());
    if (as_json) {
      auto j = to_json(d);
      j["schema"] = kSchemaVersion;
      j["validation"] = to_json(v);
      print_json(j);
    } else {
      std::cout << print_system(d.partner, "D");
      if (d.truncated) std::cout << "# truncated at depth " << depth << "\n";
      std::cout << "# with right: " << to_string(v.with_right.outcome) << ", with left: " << to_string(v.with_left.outcome)
                << (v.separates ? " (separates)" : " (does not separate)") << "\n";
    }
    rc = v.separates ? 0 : 1;
  });

  std::string input, target = "correctness";
  std::size_t max_steps = 10000;
  bool check = false;
  auto* qm = app.add_subcommand("qm", "Queue machines");
  qm->require_subcommand(1);
  auto input_word = [&](const QueueMachine& m) {
    std::vector<std::string> x;
    std::istringstream in(input);
    for (std::string s; in >> s;) x.push_back(s);
    if (x.size() == 1 && x[0].size() > 1 &&
        std::find(m.input_alphabet.begin(), m.input_alphabet.end(), x[0]) == m.input_alphabet.end()) {
      std::vector<std::string> chars;
      for (char c : x[0]) chars.emplace_back(1, c);
      return chars;
    }
    return x;
  };
  auto* qr = qm->add_subcommand("run", "Simulate a machine on an input");
  qr->add_option("machine", a_path, "Machine JSON file")->required();
  qr->add_option("--input,-x", input, "Input symbols, space separated (or one string of single-character symbols)");
  qr->add_option("--max-steps", max_steps)->capture_default_str();
  qr->callback([&] {
    auto m = load_queue_machine(a_path);
    auto r = qm_run(m, input_word(m), max_steps);
    if (as_json) {
      auto j = to_json(r);
      j["schema"] = kSchemaVersion;
      print_json(j);
    } else {
      std::cout << (r.accepted ? "Accepted" : "Unknown") << " after " << r.steps << " steps\n";
    }
    rc = r.accepted ? 0 : 2;
  });
  auto* qe = qm->add_subcommand("encode", "Encode acceptance as a pair of session types");
  qe->add_option("machine", a_path, "Machine JSON file")->required();
  qe->add_option("--input,-x", input, "Input symbols");
  qe->add_option("--target", target)->check(CLI::IsMember({"correctness", "convergence"}))->capture_default_str();
  qe->add_option("--max-steps", max_steps, "Simulation budget used to derive bounds")->capture_default_str();
  qe->add_flag("--check", check, "Run the matching bounded check with derived bounds");
  qe->callback([&] {
    auto m = load_queue_machine(a_path);
    auto x = input_word(m);
    auto [s, t] = target == "correctness" ? encode_correctness(m, x) : encode_convergence(m, x);
    json j = {{"schema", kSchemaVersion}, {"target", target}, {"left", to_string(s)}, {"right", to_string(t)}};
    if (!as_json) std::cout << print_system(s, "S") << print_system(t, "T");
    if (check) {
      auto b = qm_auto_bounds(m, x, max_steps);
      Outcome o;
      if (target == "correctness") {
        auto v = correct_bounded(s, t, b.explore);
        o = v.outcome;
        j["check"] = to_json(v, b.explore);
        if (!as_json) print_verdict(v);
      } else {
        auto c = converge_bounded(s, t, b.converge);
        o = c.outcome;
        j["check"] = {{"verdict", to_string(c.outcome)}, {"bounds", to_json(b.converge)}};
        if (!as_json) std::cout << to_string(c.outcome) << "\n";
      }
      rc = exit_code(o);
    }
    if (as_json) print_json(j);
  });

  RandomTypeSpec spec;
  std::size_t count = 100;
  std::string out_dir = "corpus", tags = "a,b,c";
  auto* ge = app.add_subcommand("gen", "Generate seeded random well-formed types");
  ge->add_option("--count", count)->capture_default_str();
  ge->add_option("--seed", spec.seed)->capture_default_str();
  ge->add_option("--max-states", spec.max_states)->capture_default_str()->check(CLI::Range(2, 1000));
  ge->add_option("--max-branching", spec.max_branching)->capture_default_str()->check(CLI::Range(1, 100));
  ge->add_option("--tags", tags, "Comma-separated tag universe")->capture_default_str();
  ge->add_option("--end-bias", spec.end_bias)->capture_default_str()->check(CLI::Range(0.0, 1.0));
  ge->add_option("--out", out_dir, "Output directory")->capture_default_str();
  ge->callback([&] {
    spec.tag_universe.clear();
    std::stringstream ss(tags);
    for (std::string t; std::getline(ss, t, ',');) {
      try {
        spec.tag_universe.emplace_back(t);
      } catch (const Error& e) {
        throw CLI::ValidationError("--tags", e.what());
      }
    }
    if (spec.end_bias <= 0.0) throw CLI::ValidationError("--end-bias", "must be positive");
    auto corpus = generate_corpus(spec, count);
    std::filesystem::create_directories(out_dir);
    json files = json::array();
    for (std::size_t i = 0; i < corpus.size(); ++i) {
      std::ostringstream name;
      name << "g" << std::setw(4) << std::setfill('0') << i << ".st";
      auto path = std::filesystem::path(out_dir) / name.str();
      std::ofstream(path) << print_system(corpus[i], "S");
      files.push_back(path.string());
    }
    if (as_json)
      print_json({{"schema", kSchemaVersion}, {"files", files}});
    else
      std::cout << "wrote " << corpus.size() << " types to " << out_dir << "\n";
  });

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::CallForAllHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return kExitUsage;
  } catch (const PreconditionFailed& e) {
    std::cerr << "fairsub: precondition failed: " << e.what() << "\n";
    return kExitData;
  } catch (const Error& e) {
    std::cerr << "fairsub: " << e.what() << "\n";
    return kExitData;
  } catch (const std::exception& e) {
    std::cerr << "fairsub: " << e.what() << "\n";
    return kExitData;
  }
  return rc;
}
