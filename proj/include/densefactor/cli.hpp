#pragma once

#include <algorithm>
#include <cstdint>
#include <optional>
#include <sstream>
#include <string>
#include <utility>
#include <vector>

#include "densefactor/dense.hpp"
#include "densefactor/errors.hpp"
#include "densefactor/filtration.hpp"
#include "densefactor/greedy.hpp"
#include "densefactor/scenario.hpp"
#include "densefactor/verify.hpp"

namespace densefactor {

// Exit codes: 0 all verdicts pass, 1 fail verdict, 2 usage/parse error,
// 3 search exhausted.
enum ExitCode : int {
  kExitPass = 0,
  kExitFail = 1,
  kExitUsage = 2,
  kExitExhausted = 3,
};

struct CommandResult {
  std::string report;
  int exit_code = kExitPass;
};

struct Overrides {
  std::optional<std::uint64_t> steps;
  std::optional<std::uint64_t> stages;
  std::optional<std::uint64_t> probes;
  std::optional<std::uint64_t> up_to;
};

namespace detail {

class ReportWriter {
public:
  void kv(const std::string& key, const std::string& value) {
    os_ << key << "=" << value << "\n";
  }
  void kv(const std::string& key, std::uint64_t value) {
    os_ << key << "=" << value << "\n";
  }
  void kv(const std::string& key, bool pass) {
    os_ << key << "=" << (pass ? "pass" : "fail") << "\n";
  }
  void line(const std::string& text) { os_ << text << "\n"; }
  void blank() { os_ << "\n"; }
  void section(const std::string& name) { os_ << "\n-- " << name << " --\n"; }
  std::string str() const { return os_.str(); }

private:
  std::ostringstream os_;
};

inline std::string element_list(const Group& g,
                                const std::vector<Element>& elems) {
  std::string s;
  for (std::size_t i = 0; i < elems.size(); ++i)
    s += (i ? " " : "") + g.format(elems[i]);
  return s;
}

inline void emit_header(ReportWriter& w, const std::string& command,
                        const Scenario& scn) {
  w.kv("command", command);
  w.kv("scenario", "fnv1a:" + scn.digest);
  w.kv("group", scn.group->describe());
  for (const auto& note : scn.guard_notes) w.line(note);
}

inline void emit_report(ReportWriter& w, const std::string& prefix,
                        const VerificationReport& report) {
  w.kv(prefix, report.pass);
  for (const auto& witness : report.witnesses)
    w.line(prefix + ".witness: " + witness);
}

inline void emit_trace(ReportWriter& w, const RunTrace& trace) {
  w.section("trace");
  for (const auto& [idx, count] : trace.squares_evidence)
    w.line("squares.U" + std::to_string(idx) + "=" + std::to_string(count));
  for (const auto& s : trace.steps) {
    std::ostringstream os;
    os << "step=" << s.step << " A=" << s.size_a << " B=" << s.size_b
       << " covered=" << s.covered << " probes=" << s.probes_used
       << " mono=" << s.monotone << " sym=" << s.symmetric
       << " oracle=" << s.oracle << " gcov=" << s.g_covered
       << " hitA=" << s.hit_a << " hitB=" << s.hit_b;
    w.line(os.str());
  }
  w.kv("candidates.probed", trace.stats.probed);
  w.kv("candidates.accepted", trace.stats.filter_accepted);
  w.kv("candidates.confirmed", trace.stats.oracle_confirmed);
  w.kv("candidates.mismatches", trace.stats.mismatches);
}

inline void emit_factors(ReportWriter& w, const Group& g,
                         const FactorPair& pair) {
  w.section("factors");
  w.line("A: " + element_list(g, pair.a));
  w.line("B: " + element_list(g, pair.b));
  if (!pair.provenance.witnesses.empty()) {
    w.section("witness log");
    for (const auto& rec : pair.provenance.witnesses) {
      std::ostringstream os;
      os << "stage=" << rec.stage << " base=U" << rec.base_index
         << " witness=" << g.format(rec.witness)
         << (rec.frontier ? " path=frontier" : " path=scan");
      w.line(os.str());
    }
  }
}

inline int run_decompose(ReportWriter& w, const Scenario& scn,
                         const Overrides&) {
  if (!scn.filtration) throw UsageError("decompose needs a filtration");
  if (!scn.element) throw UsageError("decompose needs an element");
  const Group& g = *scn.group;
  FiltrationReport validation = validate_filtration(*scn.filtration);
  if (!validation.valid) {
    w.kv("filtration", false);
    for (const auto& v : validation.violations) w.line("violation: " + v);
    w.kv("status", std::string("fail"));
    return kExitFail;
  }
  TransversalSystem t = select_transversals(*scn.filtration);
  NormalForm nf = decompose(*scn.element, *scn.filtration, t);
  w.section("normal form");
  w.line(format_normal_form(g, *scn.element, nf));
  bool roundtrip = recompose(nf, g) == *scn.element;
  w.section("verification");
  w.kv("roundtrip", roundtrip);
  w.kv("status", std::string(roundtrip ? "pass" : "fail"));
  return roundtrip ? kExitPass : kExitFail;
}

inline int verify_factor_pair(ReportWriter& w, const Scenario& scn,
                              const FactorPair& pair, bool expect_complete,
                              std::uint64_t up_to) {
  const Group& g = *scn.group;
  w.section("verification");
  VerificationReport partial = is_partial_factorization(g, pair.a, pair.b);
  emit_report(w, "partial-factorization", partial);
  bool pass = partial.pass;
  if (expect_complete && g.finite()) {
    VerificationReport full = is_factorization(g, pair.a, pair.b);
    emit_report(w, "factorization", full);
    pass = pass && full.pass;
  }
  if (up_to > 0) {
    VerificationReport da = density_report(pair.a, scn.topology, up_to);
    VerificationReport db = density_report(pair.b, scn.topology, up_to);
    emit_report(w, "density.A", da);
    emit_report(w, "density.B", db);
    pass = pass && da.pass && db.pass;
  }
  w.kv("status", std::string(pass ? "pass" : "fail"));
  return pass ? kExitPass : kExitFail;
}

inline int run_factorize_filtration(ReportWriter& w, const Scenario& scn,
                                    const Overrides& ov) {
  if (!scn.filtration)
    throw UsageError("factorize-filtration needs a filtration");
  const Group& g = *scn.group;
  FiltrationReport validation = validate_filtration(*scn.filtration);
  w.kv("filtration", validation.valid);
  for (const auto& v : validation.violations) w.line("violation: " + v);
  for (const auto& n : validation.notes) w.line("note: " + n);
  if (!validation.valid) {
    w.kv("status", std::string("fail"));
    return kExitFail;
  }
  TransversalSystem t = select_transversals(*scn.filtration);
  ExtractScope scope =
      g.finite() ? ExtractScope::all()
                 : ExtractScope::prefix(scn.param("prefix", 64));
  FactorPair pair = extract_factors(*scn.filtration, t, scope);
  w.kv("A.size", static_cast<std::uint64_t>(pair.a.size()));
  w.kv("B.size", static_cast<std::uint64_t>(pair.b.size()));
  emit_factors(w, g, pair);
  std::uint64_t up_to =
      ov.up_to.value_or(scn.param("up-to", scn.topology.size()));
  return verify_factor_pair(w, scn, pair, g.finite() && scn.filtration->complete,
                            std::min<std::uint64_t>(up_to, scn.topology.size()));
}

inline int run_factorize_dense(ReportWriter& w, const Scenario& scn,
                               const Overrides& ov) {
  if (scn.topology.empty())
    throw UsageError("factorize-dense needs a base family");
  const Group& g = *scn.group;
  std::uint64_t stages = ov.stages.value_or(scn.param("stages", 8));
  std::uint64_t probes = ov.probes.value_or(scn.param("probes", kDefaultProbes));
  std::uint64_t bound = scn.param("bound", kDefaultBound);
  DenseBuildResult built = build_dense_filtration(
      scn.group, scn.topology, static_cast<std::size_t>(stages), bound, probes);
  w.kv("stages.built",
       static_cast<std::uint64_t>(built.filtration.levels()));
  for (std::size_t i = 0; i < built.filtration.chain.size(); ++i)
    w.line("level." + std::to_string(i) + "=" +
           built.filtration.chain[i].describe());
  // Every transversal level must meet every base set of lower index.
  std::uint64_t density_violations = 0;
  for (std::size_t a = 0; a < built.transversals.size(); ++a) {
    const auto& reps = built.transversals.at(a).reps();
    for (std::size_t c = 0; c <= std::min(a, scn.topology.size() - 1); ++c) {
      bool hit = false;
      for (const auto& r : reps)
        if (scn.topology[c].contains(r)) { hit = true; break; }
      if (!hit) ++density_violations;
    }
  }
  w.kv("transversal.density.violations", density_violations);

  ExtractScope scope =
      g.finite() ? ExtractScope::all()
                 : ExtractScope::prefix(scn.param("prefix", 64));
  FactorPair pair = extract_factors(built.filtration, built.transversals,
                                    scope);
  pair.provenance.construction = "dense-filtration";
  pair.provenance.witnesses = built.witness_log;
  w.kv("A.size", static_cast<std::uint64_t>(pair.a.size()));
  w.kv("B.size", static_cast<std::uint64_t>(pair.b.size()));
  emit_factors(w, g, pair);
  std::uint64_t up_to =
      ov.up_to.value_or(scn.param("up-to", scn.topology.size()));
  int code = verify_factor_pair(
      w, scn, pair, g.finite() && built.filtration.complete,
      std::min<std::uint64_t>(up_to, scn.topology.size()));
  return density_violations == 0 ? code : kExitFail;
}

inline int run_factorize_transversal(ReportWriter& w, const Scenario& scn,
                                     const Overrides& ov) {
  if (!scn.subgroup)
    throw UsageError("factorize-transversal needs a subgroup");
  const Group& g = *scn.group;
  std::uint64_t coverage = scn.param("coverage", 256);
  std::uint64_t probes = ov.probes.value_or(scn.param("probes", kDefaultProbes));
  TransversalFactorization result =
      subgroup_transversal_factorize(*scn.subgroup, scn.topology, coverage,
                                     probes);
  w.kv("A.size", static_cast<std::uint64_t>(result.pair.a.size()));
  w.kv("B.size", static_cast<std::uint64_t>(result.pair.b.size()));
  emit_factors(w, g, result.pair);

  w.section("verification");
  VerificationReport partial =
      is_partial_factorization(g, result.pair.a, result.pair.b);
  emit_report(w, "partial-factorization", partial);
  bool pass = partial.pass;

  // Coverage with unique witnesses over the enumeration prefix.
  std::uint64_t covered = 0;
  bool unique = true;
  EnumCursor cursor(scn.group);
  for (std::uint64_t i = 0; i < coverage; ++i) {
    auto e = cursor.next();
    if (!e) break;
    std::size_t hits = 0;
    for (const auto& b : result.pair.b)
      if (scn.subgroup->contains(g.op(*e, g.inv(b)))) ++hits;
    if (hits == 1) ++covered;
    if (hits > 1) unique = false;
  }
  std::uint64_t expected =
      g.finite() ? std::min<std::uint64_t>(coverage, *g.order()) : coverage;
  w.kv("coverage.unique", covered);
  w.kv("coverage.expected", expected);
  bool cover_ok = unique && covered == expected;
  emit_report(w, "coverage", [&] {
    VerificationReport r;
    if (!cover_ok)
      r.fail("only " + std::to_string(covered) + " of " +
             std::to_string(expected) + " prefix elements uniquely covered");
    return r;
  }());
  pass = pass && cover_ok;

  std::uint64_t up_to =
      ov.up_to.value_or(scn.param("up-to", scn.topology.size()));
  up_to = std::min<std::uint64_t>(up_to, scn.topology.size());
  if (up_to > 0) {
    VerificationReport db = density_report(result.pair.b, scn.topology,
                                           up_to);
    emit_report(w, "density.B", db);
    pass = pass && db.pass;
  }
  w.kv("status", std::string(pass ? "pass" : "fail"));
  return pass ? kExitPass : kExitFail;
}

inline int run_greedy(ReportWriter& w, const Scenario& scn,
                      const Overrides& ov, bool comment4) {
  if (scn.topology.empty()) throw UsageError("greedy runs need a base family");
  std::uint64_t steps = ov.steps.value_or(
      scn.param("steps", comment4 ? 32 : scn.topology.size()));
  std::uint64_t probes = ov.probes.value_or(scn.param("probes", kDefaultProbes));
  GreedyResult result =
      comment4 ? run_comment4(scn.group, scn.topology,
                              static_cast<std::size_t>(steps), probes)
               : run_comment6(scn.group, scn.topology,
                              static_cast<std::size_t>(steps), probes);
  const Group& g = *scn.group;
  w.kv("steps.requested", steps);
  w.kv("steps.completed", static_cast<std::uint64_t>(result.trace.steps.size()));
  emit_trace(w, result.trace);
  w.section("factors");
  w.line("A: " + element_list(g, g.sorted_by_enum(result.pf.a())));
  w.line("B: " + element_list(g, g.sorted_by_enum(result.pf.b())));

  w.section("verification");
  VerificationReport oracle =
      is_partial_factorization(g, result.pf.a(), result.pf.b());
  emit_report(w, "partial-factorization", oracle);
  bool invariants = true;
  for (const auto& s : result.trace.steps)
    invariants = invariants && s.all_ok(comment4);
  w.kv("per-step-invariants", invariants);

  if (!result.ok()) {
    w.kv("exhausted", result.trace.detail);
    w.kv("status", std::string("search-exhausted"));
    return kExitExhausted;
  }
  bool pass = oracle.pass && invariants;
  w.kv("status", std::string(pass ? "pass" : "fail"));
  return pass ? kExitPass : kExitFail;
}

inline int run_verify(ReportWriter& w, const Scenario& scn,
                      const Overrides&) {
  bool pass = true;
  w.section("verification");
  for (std::size_t i = 0; i < scn.topology.size(); ++i) {
    std::uint64_t squares = squares_check(scn.topology[i], 64);
    w.kv("squares.U" + std::to_string(i), squares);
  }
  if (scn.filtration) {
    FiltrationReport validation = validate_filtration(*scn.filtration);
    w.kv("filtration.valid", validation.valid);
    for (const auto& v : validation.violations) w.line("violation: " + v);
    for (const auto& n : validation.notes) w.line("note: " + n);
    pass = pass && validation.valid;
    if (validation.valid) {
      TransversalSystem t = select_transversals(*scn.filtration);
      AuditScope scope = scn.group->finite()
                             ? AuditScope::all()
                             : AuditScope::prefix(scn.param("prefix", 64));
      VerificationReport audit =
          filtration_audit(*scn.filtration, t, scope);
      emit_report(w, "filtration-audit", audit);
      pass = pass && audit.pass;
    }
  }
  w.kv("status", std::string(pass ? "pass" : "fail"));
  return pass ? kExitPass : kExitFail;
}

}  // namespace detail

inline const std::vector<std::string>& command_names() {
  static const std::vector<std::string> names = {
      "decompose",        "factorize-filtration", "factorize-dense",
      "factorize-transversal", "greedy-c4",       "greedy-c6",
      "verify"};
  return names;
}

// Dispatches a command against a parsed scenario and renders the
// deterministic report. Library errors map onto exit codes; the report
// always carries a final status line.
inline CommandResult run_command(const std::string& command,
                                 const Scenario& scn, const Overrides& ov = {}) {
  detail::ReportWriter w;
  detail::emit_header(w, command, scn);
  int code = kExitUsage;
  try {
    if (command == "decompose") {
      code = detail::run_decompose(w, scn, ov);
    } else if (command == "factorize-filtration") {
      code = detail::run_factorize_filtration(w, scn, ov);
    } else if (command == "factorize-dense") {
      code = detail::run_factorize_dense(w, scn, ov);
    } else if (command == "factorize-transversal") {
      code = detail::run_factorize_transversal(w, scn, ov);
    } else if (command == "greedy-c4") {
      code = detail::run_greedy(w, scn, ov, /*comment4=*/true);
    } else if (command == "greedy-c6") {
      code = detail::run_greedy(w, scn, ov, /*comment4=*/false);
    } else if (command == "verify") {
      code = detail::run_verify(w, scn, ov);
    } else {
      throw UsageError("unknown command '" + command + "'");
    }
  } catch (const SearchExhausted& e) {
    w.kv("error", e.code());
    w.line(e.what());
    w.kv("status", std::string("search-exhausted"));
    code = kExitExhausted;
  } catch (const WitnessSearchExhausted& e) {
    w.kv("error", e.code());
    w.line(e.what());
    w.kv("status", std::string("search-exhausted"));
    code = kExitExhausted;
  } catch (const FilterOracleMismatch& e) {
    w.kv("error", e.code());
    w.line(e.what());
    w.kv("status", std::string("fail"));
    code = kExitFail;
  } catch (const Error& e) {
    w.kv("error", e.code());
    w.line(e.what());
    w.kv("status", std::string("usage-error"));
    code = kExitUsage;
  }
  return {w.str(), code};
}

}  // namespace densefactor
