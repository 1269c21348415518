#include "addcomb/harness.hpp"

#include <algorithm>
#include <atomic>
#include <bit>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <functional>
#include <limits>
#include <numbers>
#include <random>
#include <set>
#include <stdexcept>
#include <thread>
#include <tuple>

namespace addcomb {

double potential(const Rational& k, const Rational& alpha, double gamma) {
  if (!(alpha > Rational(0))) throw std::invalid_argument("potential: alpha must be positive");
  return to_double(k) * std::pow(to_double(alpha), -gamma);
}

const char* to_string(Severity s) {
  switch (s) {
    case Severity::ErratumClass:
      return "erratum-class";
    case Severity::DecrementMiss:
      return "decrement-miss";
    case Severity::BoundMiss:
      return "bound-miss";
  }
  return "bound-miss";
}

Severity parse_severity(std::string_view text) {
  if (text == "erratum-class") return Severity::ErratumClass;
  if (text == "decrement-miss") return Severity::DecrementMiss;
  if (text == "bound-miss") return Severity::BoundMiss;
  throw std::invalid_argument("unknown severity '" + std::string(text) + "'");
}

std::string format_real(double v) {
  if (std::isnan(v)) return "nan";
  if (std::isinf(v)) return v > 0 ? "inf" : "-inf";
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

namespace {

auto record_key(const ViolationRecord& r) {
  return std::tie(r.lemma, r.severity, r.set, r.preset, r.seed, r.note);
}

std::vector<std::pair<std::string, std::string>> measured_pairs(const ViolationRecord& r) {
  std::vector<std::pair<std::string, std::string>> out;
  for (const auto& m : r.measured) out.emplace_back(m.name, m.value);
  return out;
}

}  // namespace

bool operator<(const ViolationRecord& a, const ViolationRecord& b) {
  if (a.lemma != b.lemma) return a.lemma < b.lemma;
  if (a.severity != b.severity) return a.severity < b.severity;
  const auto ga = a.group.factors();
  const auto gb = b.group.factors();
  if (ga != gb) return ga < gb;
  if (record_key(a) != record_key(b)) return record_key(a) < record_key(b);
  return measured_pairs(a) < measured_pairs(b);
}

bool operator==(const ViolationRecord& a, const ViolationRecord& b) {
  return a.group == b.group && record_key(a) == record_key(b) && measured_pairs(a) == measured_pairs(b);
}

std::uint64_t mix_seed(std::uint64_t seed, std::uint64_t stream) {
  auto splitmix = [](std::uint64_t x) {
    x += 0x9E3779B97F4A7C15ULL;
    x = (x ^ (x >> 30)) * 0xBF58476D1CE4E5B9ULL;
    x = (x ^ (x >> 27)) * 0x94D049BB133111EBULL;
    return x ^ (x >> 31);
  };
  return splitmix(seed ^ splitmix(stream + 1));
}

std::size_t default_budget(const Rational& k0, const LedgerConfig& cfg) {
  const double b = std::ceil(std::pow(to_double(k0), cfg.C + 1) - 1e-12);
  return static_cast<std::size_t>(std::clamp(b, 1.0, 1e4));
}

namespace {

ViolationRecord make_record(std::string lemma, Severity sev, const GroupSet& a, const LedgerConfig& cfg,
                            std::vector<Measurement> measured, std::string note = {}) {
  ViolationRecord r;
  r.lemma = std::move(lemma);
  r.severity = sev;
  r.group = a.group();
  r.set = a.members();
  r.preset = cfg.preset;
  r.seed = cfg.seed;
  r.measured = std::move(measured);
  r.note = std::move(note);
  return r;
}

std::string elements_string(const std::vector<Index>& v) {
  std::string s;
  for (std::size_t i = 0; i < v.size(); ++i) {
    if (i) s += ',';
    s += std::to_string(v[i]);
  }
  return s;
}

}  // namespace

IterationTrace iterate_psl(const GroupSet& a, const LedgerConfig& cfg, std::optional<std::size_t> budget) {
  cfg.validate();
  if (a.empty()) throw std::invalid_argument("iterate_psl: empty set");
  if (budget && *budget == 0) throw std::invalid_argument("iterate_psl: budget must be at least 1");
  IterationTrace trace;
  trace.initial = a;
  const Rational k0 = doubling_constant(a);
  trace.budget = budget ? *budget : default_budget(k0, cfg);
  trace.codim_budget = std::pow(to_double(k0), 2 * (cfg.C + 1));

  GroupSet cur = a;
  for (int j = 0;; ++j) {
    if (static_cast<std::size_t>(j) >= trace.budget) {
      trace.terminal = "budget-exhausted";
      trace.findings.push_back(make_record("iteration-budget", Severity::BoundMiss, a, cfg,
                                           {{"budget", std::to_string(trace.budget)},
                                            {"steps", std::to_string(trace.steps.size())},
                                            {"k0", to_string(k0)}}));
      break;
    }
    const auto outcome = psl_step(cur, cfg);
    const auto& art = outcome.artifacts;
    IterationStep step;
    step.j = j;
    step.group = cur.group();
    step.set_size = cur.size();
    step.k = art.k;
    step.alpha = cur.density();
    step.potential = potential(step.k, step.alpha, cfg.gamma);
    step.outcome = outcome.kind();
    step.regime = to_string(art.regime.kind);
    step.beta = art.regime.beta;
    step.spectrum_size = art.spectrum.members.size();
    step.span_dim = art.dissociated.size();
    if (step.potential < 1.0 - 1e-12) {
      trace.findings.push_back(make_record("potential-lower-bound", Severity::BoundMiss, a, cfg,
                                           {{"step", std::to_string(j)}, {"potential", format_real(step.potential)}}));
    }

    if (const auto* nc = std::get_if<NearCoset>(&outcome.result)) {
      trace.terminal = "near-coset";
      trace.near_coset = *nc;
      trace.steps.push_back(std::move(step));
      break;
    }
    if (const auto* und = std::get_if<Undetermined>(&outcome.result)) {
      trace.terminal = "undetermined";
      step.note = und->reason;
      if (und->attempted) step.delta = und->attempted->delta;
      trace.steps.push_back(std::move(step));
      break;
    }
    const auto& imp = std::get<Improvement>(outcome.result);
    step.delta = imp.delta;
    step.codim = imp.map.codim();
    trace.total_codim += step.codim;
    const double next = potential(imp.k_prime, imp.a_prime.density(), cfg.gamma);
    std::vector<Measurement> base{{"step", std::to_string(j)},
                                  {"k", to_string(step.k)},
                                  {"k_next", to_string(imp.k_prime)},
                                  {"alpha", to_string(step.alpha)},
                                  {"alpha_next", to_string(imp.a_prime.density())}};
    if (next > step.potential * (1 + 1e-12)) {
      auto m = base;
      m.push_back({"potential", format_real(step.potential)});
      m.push_back({"potential_next", format_real(next)});
      m.push_back({"gamma", format_real(cfg.gamma)});
      trace.findings.push_back(make_record("potential-monotonicity", Severity::BoundMiss, a, cfg, std::move(m)));
    }
    if (!imp.decrement.floor_ok) {
      auto m = base;
      m.push_back({"delta", to_string(imp.delta)});
      m.push_back({"floor", format_real(std::pow(to_double(step.k), -cfg.C))});
      trace.findings.push_back(make_record("decrement-floor", Severity::DecrementMiss, a, cfg, std::move(m)));
    }
    if (!imp.decrement.e2d_ok) {
      auto m = base;
      m.push_back({"energy_boost", format_real(imp.decrement.energy_boost)});
      m.push_back({"eta", format_real(imp.decrement.eta)});
      trace.findings.push_back(make_record("e2d-quotient", Severity::BoundMiss, a, cfg, std::move(m)));
    }
    if (!imp.v_prime_meets_v_trivially) {
      auto m = base;
      m.push_back({"v_prime_dim", std::to_string(imp.v_prime.dim())});
      trace.findings.push_back(make_record("dissoc-quot-intersection", Severity::ErratumClass, a, cfg, std::move(m),
                                           "V' meets V beyond 0"));
    }
    trace.steps.push_back(std::move(step));
    cur = imp.a_prime;
  }
  trace.final_set = cur;
  return trace;
}

GrayZoneReport gray_zone_check(const GroupSet& a, const LedgerConfig& cfg) {
  if (a.empty()) throw std::invalid_argument("gray_zone_check: empty set");
  const auto& g = a.group();
  const auto t = transform(a);
  const Rational k = doubling_constant(a);
  const double kd = to_double(k);
  const double alpha = to_double(a.density());
  const double tau = std::pow(kd, -cfg.c0);
  const auto spec = large_spectrum(t, alpha, tau);
  const auto v = span(g, extract_maximal_dissociated(g, spec));
  const auto regime = classify_regime(t, kd, v, cfg);
  GrayZoneReport r;
  r.beta = regime.beta;
  r.applicable = regime.kind == Regime::Gray && !regime.small_k;
  if (!r.applicable) {
    r.holds = true;
    return r;
  }
  r.refined_tau = tau / 2;
  const auto refined = large_spectrum(t, alpha, r.refined_tau);
  const auto vr = enumerate_dual_subgroup(g, refined.members);
  r.upgrade_ratio = concentration_beta(t, vr).beta;
  r.upgrade_holds = r.upgrade_ratio >= 1.0 - std::pow(kd, -cfg.c) - kBetaSlack;
  ImprovementInput in{&a, &t, &v, Regime::Gray, k, tau};
  const auto out = improvement_step(in, cfg);
  if (const auto* imp = std::get_if<Improvement>(&out)) {
    r.delta = imp->delta;
    r.improvement_holds = imp->decrement.floor_ok && imp->size_floor_ok;
  } else if (const auto& und = std::get<Undetermined>(out); und.attempted) {
    r.delta = und.attempted->delta;
  }
  r.holds = r.upgrade_holds || r.improvement_holds;
  return r;
}

AlmostPeriodReport almost_periods(const GroupSet& a, const LedgerConfig& cfg, std::uint64_t seed) {
  if (a.empty()) throw std::invalid_argument("almost_periods: empty set");
  const auto& g = a.group();
  const Rational k = doubling_constant(a);
  const double kd = to_double(k);
  const auto t = transform(a);
  const auto spec = large_spectrum(t, to_double(a.density()), std::pow(kd, -cfg.c0));
  std::vector<DualElement> s;
  for (auto xi : spec.members) {
    if (xi != 0) s.push_back(xi);
  }
  AlmostPeriodReport r;
  r.packet = sample_packet(g, s, cfg.packet_eps, cfg.packet_eta_for(kd), seed, cfg.C_pkt, cfg.packet_retries);
  r.l2 = packet_l2_error(a, r.packet);
  r.shifts = good_shifts(a, r.packet);
  r.in_difference_fraction = packet_in_difference_fraction(a, r.packet);
  std::vector<Index> support(r.packet.members.begin(), r.packet.members.end());
  std::sort(support.begin(), support.end());
  support.erase(std::unique(support.begin(), support.end()), support.end());
  r.packet_doubling = doubling_constant(GroupSet(g, std::move(support)));
  r.shift_count_ok = static_cast<double>(r.shifts.good.size()) <= std::pow(kd, cfg.C) + 1e-12;
  r.packet_size_ok =
      static_cast<double>(r.packet.members.size()) >= std::pow(kd, -cfg.C) * static_cast<double>(a.size()) - 1e-12;
  return r;
}

ToyReport toy_example(const LedgerConfig& cfg, double alpha, int nominal_k) {
  cfg.validate();
  constexpr std::int64_t n = 97;
  if (!(alpha > 0.0 && alpha <= 0.25 + 1e-12)) throw std::invalid_argument("toy_example: alpha must lie in (0, 1/4]");
  if (nominal_k < 2) throw std::invalid_argument("toy_example: nominal K must be at least 2");
  const auto m = static_cast<std::int64_t>(std::floor(alpha * static_cast<double>(n) + 1e-9));
  if (m < 1) throw std::invalid_argument("toy_example: alpha * 97 is below 1");
  const auto g = GroupSpec::cyclic(n);
  std::vector<Index> members(static_cast<std::size_t>(m));
  for (std::int64_t i = 0; i < m; ++i) members[i] = static_cast<Index>(i);

  ToyReport r;
  r.alpha_requested = alpha;
  r.nominal_k = nominal_k;
  r.a = GroupSet(g, std::move(members));
  r.k = doubling_constant(r.a);
  r.sumset_size = sumset(r.a, r.a).size();
  r.doubling_ok = r.sumset_size <= static_cast<std::size_t>(nominal_k) * r.a.size();
  r.tau = std::pow(static_cast<double>(nominal_k), -cfg.c0);

  const auto t = transform(r.a);
  const double a_eff = static_cast<double>(m) / static_cast<double>(n);
  for (std::int64_t xi = -n / 2; xi <= n / 2; ++xi) {
    const double x = std::numbers::pi * a_eff * static_cast<double>(xi);
    const double sinc = xi == 0 ? 1.0 : std::sin(x) / x;
    if (std::abs(sinc) < r.sinc_window) continue;
    const double approx = a_eff * std::abs(sinc);
    const double exact = std::abs(t.coeffs[static_cast<std::size_t>((xi + n) % n)]);
    r.sinc_max_relative_error = std::max(r.sinc_max_relative_error, std::abs(exact - approx) / approx);
    ++r.sinc_points;
  }
  r.sinc_ok = r.sinc_max_relative_error <= 0.05;

  const auto spec = large_spectrum(t, a_eff, r.tau);
  for (auto xi : spec.members) {
    const auto s = static_cast<std::int64_t>(xi);
    r.spectrum.push_back(s > n / 2 ? s - n : s);
  }
  std::sort(r.spectrum.begin(), r.spectrum.end());
  {
    const auto w = r.spectrum.empty() ? -1 : r.spectrum.back();
    bool ok = !r.spectrum.empty() && r.spectrum.front() == -w &&
              r.spectrum.size() == static_cast<std::size_t>(2 * w + 1);
    for (std::size_t i = 1; ok && i < r.spectrum.size(); ++i) ok = r.spectrum[i] == r.spectrum[i - 1] + 1;
    r.spectrum_symmetric_interval = ok;
  }
  if (a_eff < 1.0) r.chang = chang_audit(t, a_eff, r.tau, cfg.C_RC);
  r.psl = psl_step(r.a, cfg);
  r.trace = iterate_psl(r.a, cfg);
  r.polybog = polybog_search(r.a, cfg);
  return r;
}

std::vector<Element> canonical_translate(const GroupSet& a) {
  const auto& g = a.group();
  std::vector<Element> best;
  std::vector<Element> cur;
  for (Index base : a.members()) {
    cur.clear();
    for (Index x : a.members()) cur.push_back(g.sub(x, base));
    std::sort(cur.begin(), cur.end());
    if (best.empty() || cur < best) best = cur;
  }
  return best;
}

unsigned worker_count() {
  if (const char* env = std::getenv("ADDCOMB_WORKERS")) {
    const long v = std::strtol(env, nullptr, 10);
    if (v > 0) return static_cast<unsigned>(v);
  }
  return std::max(1u, std::thread::hardware_concurrency());
}

namespace {

struct Instance {
  std::size_t group_index = 0;
  std::vector<Index> members;  // canonical translate
  std::uint64_t weight = 1;    // number of sets represented (translation orbit size in exhaustive mode)
  std::uint64_t seed = 0;
};

struct GroupData {
  GroupSpec g;
  std::string name;
  std::vector<QuotientContext> contexts;  // proper nontrivial subgroups
};

class Collector {
 public:
  explicit Collector(std::size_t max_examples) : max_(max_examples) {}

  void evaluated(const std::string& lemma, const std::string& group, std::uint64_t w) {
    tallies_[{lemma, group}].evaluated += w;
  }
  void violation(ViolationRecord r, const std::string& group, std::uint64_t w) {
    auto& t = tallies_[{r.lemma, group}];
    t.violations += w;
    auto& ex = examples_[{r.lemma, group}];
    ex.insert(std::move(r));
    if (ex.size() > max_) ex.erase(std::prev(ex.end()));
  }
  void check(bool ok, const std::string& lemma, const std::string& group, std::uint64_t w,
             const std::function<ViolationRecord()>& make) {
    evaluated(lemma, group, w);
    if (!ok) violation(make(), group, w);
  }
  void merge(Collector&& other) {
    for (auto& [key, t] : other.tallies_) {
      tallies_[key].evaluated += t.evaluated;
      tallies_[key].violations += t.violations;
    }
    for (auto& [key, ex] : other.examples_) {
      auto& mine = examples_[key];
      mine.merge(ex);
      while (mine.size() > max_) mine.erase(std::prev(mine.end()));
    }
  }
  ScanResult finish() && {
    ScanResult out;
    for (auto& [key, ex] : examples_) {
      for (const auto& r : ex) out.findings.push_back(r);
    }
    std::sort(out.findings.begin(), out.findings.end());
    for (auto& [key, t] : tallies_) out.tallies.push_back({key.first, key.second, t.evaluated, t.violations});
    return out;
  }

 private:
  struct Count {
    std::uint64_t evaluated = 0;
    std::uint64_t violations = 0;
  };
  std::size_t max_;
  std::map<std::pair<std::string, std::string>, Count> tallies_;
  std::map<std::pair<std::string, std::string>, std::set<ViolationRecord>> examples_;
};

void evaluate(const Instance& inst, const GroupData& gd, const ScanSpace& space, const LedgerConfig& base_cfg,
              Collector& out) {
  LedgerConfig cfg = base_cfg;
  cfg.seed = inst.seed;
  const GroupSet a(gd.g, inst.members);
  const auto& name = gd.name;
  const std::uint64_t w = inst.weight;
  const auto t = transform(a);
  const double alpha = to_double(a.density());
  const Rational k = doubling_constant(a);
  const double kd = to_double(k);
  auto rec = [&](std::string lemma, Severity s, std::vector<Measurement> m, std::string note = {}) {
    return [&, lemma = std::move(lemma), s, m = std::move(m), note = std::move(note)]() {
      return make_record(lemma, s, a, cfg, m, note);
    };
  };

  const auto en = additive_energy(a, t);
  const std::vector<Measurement> em{{"energy", std::to_string(en.combinatorial)},
                                    {"size", std::to_string(a.size())},
                                    {"doubling", to_string(en.doubling)}};
  out.check(en.lower_ok, "energy-lower", name, w, rec("energy-lower", Severity::BoundMiss, em));
  out.check(en.upper_ok, "energy-upper", name, w, rec("energy-upper", Severity::BoundMiss, em));
  out.check(en.identity_residual <= 1e-8, "energy-identity", name, w,
            rec("energy-identity", Severity::BoundMiss, {{"residual", format_real(en.identity_residual)}}));
  if (gd.g.order() > 1) {
    out.check(en.printed_form_matches, "energy-printed-form", name, w,
              rec("energy-printed-form", Severity::ErratumClass,
                  {{"energy", std::to_string(en.combinatorial)}, {"printed_form", format_real(en.printed_form)}},
                  "E(A) equals |G|^3 sum |f^|^4, not |G| sum |f^|^4"));

    DualElement top = 1;
    for (DualElement xi = 1; xi < t.coeffs.size(); ++xi) {
      if (std::abs(t.coeffs[xi]) > std::abs(t.coeffs[top]) + 1e-15) top = xi;
    }
    const auto e2d = energy_to_doubling_check(t, alpha, top);
    out.check(e2d.holds, "e2d", name, w,
              rec("e2d", Severity::BoundMiss,
                  {{"xi", std::to_string(top)}, {"lhs", format_real(e2d.lhs)}, {"rhs", format_real(e2d.rhs)}}));
  }

  const double tau = std::pow(kd, -cfg.c0);
  if (alpha < 1.0) {
    const auto ch = chang_audit(t, alpha, tau, cfg.C_RC);
    out.check(ch.pass, "chang-size", name, w,
              rec("chang-size", Severity::BoundMiss,
                  {{"dissociated", std::to_string(ch.dissociated_size)}, {"bound", format_real(ch.bound_rhs)}}));
    out.check(ch.rc_pass, "rudin-chang", name, w,
              rec("rudin-chang", Severity::BoundMiss,
                  {{"lhs", format_real(ch.energy_lhs)}, {"rhs", format_real(ch.energy_rhs)}}));
  }

  const auto l4 = l4_compression_audit(t, alpha, kd, cfg);
  out.check(l4.compress_pass, "l4-compression", name, w,
            rec("l4-compression", Severity::BoundMiss,
                {{"mass_in_s", format_real(l4.mass_in_s)}, {"rhs", format_real(l4.compress_rhs)}}));
  out.check(l4.tail_pass, "l4-tail", name, w,
            rec("l4-tail", Severity::BoundMiss, {{"lhs", format_real(l4.tail_lhs)}, {"rhs", format_real(l4.tail_rhs)}}));

  if (space.lift) {
    for (const auto& ctx : gd.contexts) {
      const auto lc = quotient_lift_check(a, t, ctx);
      const std::string kernel = elements_string(ctx.map.kernel.elements);
      out.check(lc.ab_holds, "exact-quotient-averaged", name, w,
                rec("exact-quotient-averaged", Severity::BoundMiss,
                    {{"kernel", kernel}, {"residual", format_real(lc.max_ab_residual)}}));
      out.check(lc.classification != LiftClass::IndicatorDiscrepancy, "exact-quotient-indicator", name, w,
                rec("exact-quotient-indicator", Severity::ErratumClass,
                    {{"kernel", kernel}, {"residual", format_real(lc.max_ac_residual)}},
                    "image-indicator reading differs for a set that is not a union of kernel cosets"));
      out.check(lc.classification != LiftClass::Unexpected, "exact-quotient-unexpected", name, w,
                rec("exact-quotient-unexpected", Severity::BoundMiss,
                    {{"kernel", kernel},
                     {"ab", format_real(lc.max_ab_residual)},
                     {"ac", format_real(lc.max_ac_residual)},
                     {"saturated", lc.saturated ? "true" : "false"}}));
    }
  }

  if (space.iteration) {
    const auto trace = iterate_psl(a, cfg);
    std::uint64_t improvements = 0;
    for (const auto& s : trace.steps) improvements += s.outcome == "improvement";
    for (const char* lemma : {"potential-monotonicity", "decrement-floor", "e2d-quotient", "dissoc-quot-intersection"}) {
      out.evaluated(lemma, name, w * improvements);
    }
    out.evaluated("potential-lower-bound", name, w * trace.steps.size());
    out.evaluated("iteration-budget", name, w);
    for (auto f : trace.findings) out.violation(std::move(f), name, w);

    const auto& last = trace.steps.back();
    if (trace.terminal == "undetermined") {
      const bool concentrated = last.regime == "concentrated";
      std::vector<Measurement> m{{"step", std::to_string(last.j)}, {"k", to_string(last.k)}, {"regime", last.regime}};
      if (last.delta) m.push_back({"delta", to_string(*last.delta)});
      out.violation(make_record(concentrated ? "near-coset-miss" : "psl-undetermined",
                                concentrated ? Severity::BoundMiss : Severity::DecrementMiss, a, cfg, std::move(m),
                                last.note),
                    name, w);
    }
    out.evaluated("near-coset-miss", name, w);
    out.evaluated("psl-undetermined", name, w);

    const auto gz = gray_zone_check(a, cfg);
    if (gz.applicable) {
      std::vector<Measurement> m{{"beta", format_real(gz.beta)}, {"upgrade_ratio", format_real(gz.upgrade_ratio)}};
      if (gz.delta) m.push_back({"delta", to_string(*gz.delta)});
      out.check(gz.holds, "gray-zone", name, w, rec("gray-zone", Severity::DecrementMiss, std::move(m)));
    }
  }

  if (space.packets && gd.g.order() > 1) {
    const auto ap = almost_periods(a, cfg, inst.seed);
    const std::vector<Measurement> pm{{"packet_size", std::to_string(ap.packet.members.size())},
                                      {"bias", format_real(ap.packet.achieved_bias)},
                                      {"attempt_seed", std::to_string(ap.packet.attempt_seed)}};
    out.check(ap.packet.success, "packet-bias", name, w, rec("packet-bias", Severity::BoundMiss, pm));
    auto with = [&pm](std::vector<Measurement> extra) {
      auto m = pm;
      m.insert(m.end(), extra.begin(), extra.end());
      return m;
    };
    out.check(ap.l2.sound_holds, "packet-l2-sound", name, w,
              rec("packet-l2-sound", Severity::BoundMiss,
                  with({{"error", format_real(ap.l2.error)}, {"bound", format_real(ap.l2.sound_bound)}})));
    out.check(ap.l2.scaled_holds, "packet-l2-printed", name, w,
              rec("packet-l2-printed", Severity::ErratumClass,
                  with({{"error", format_real(ap.l2.error)}, {"bound", format_real(ap.l2.scaled_bound)}}),
                  "2 eps^2 on the spectrum is below the (1 - eps)^2 the bracket can reach"));
    out.check(ap.shifts.printed_identity_holds, "avg-to-indiv", name, w,
              rec("avg-to-indiv", Severity::ErratumClass,
                  with({{"mean_shift_error", format_real(ap.shifts.mean_shift_error)},
                        {"error", format_real(ap.shifts.error)},
                        {"residual", format_real(ap.shifts.printed_identity_residual)}}),
                  "the average of ||g - tau_x g||^2 exceeds E by |G| sum |g^|^2 (1 - |b|^2)"));
    out.check(ap.shifts.contract_holds, "many-shifts", name, w,
              rec("many-shifts", Severity::ErratumClass,
                  with({{"good", std::to_string(ap.shifts.good.size())}}), "threshold 2E inherits the identity error"));
    out.check(ap.shifts.markov_holds, "many-shifts-markov", name, w,
              rec("many-shifts-markov", Severity::BoundMiss,
                  with({{"good_markov", std::to_string(ap.shifts.good_markov.size())}})));
  }
}

std::uint64_t binomial(std::uint64_t n, std::uint64_t k) {
  if (k > n) return 0;
  std::uint64_t r = 1;
  for (std::uint64_t i = 1; i <= k; ++i) r = r * (n - k + i) / i;
  return r;
}

std::uint64_t draw_below(std::mt19937_64& gen, std::uint64_t n) {
  const std::uint64_t limit = std::numeric_limits<std::uint64_t>::max() - std::numeric_limits<std::uint64_t>::max() % n;
  std::uint64_t v;
  do {
    v = gen();
  } while (v >= limit);
  return v % n;
}

}  // namespace

ScanResult scan_for_violations(const ScanSpace& space, const LedgerConfig& cfg, std::uint64_t seed,
                               unsigned workers) {
  cfg.validate();
  if (space.groups.empty()) throw std::invalid_argument("scan_for_violations: no groups");
  if (space.min_size < 1 || space.min_size > space.max_size) {
    throw std::invalid_argument("scan_for_violations: bad size range");
  }
  std::vector<GroupData> groups;
  for (const auto& g : space.groups) {
    if (space.exhaustive && (g.order() > 24 || space.max_size > 10)) {
      throw BudgetError("scan_for_violations: exhaustive mode needs group order <= 24 and |A| <= 10");
    }
    GroupData gd{g, g.to_string(), {}};
    if (space.lift) {
      for (const auto& h : all_subgroups(g)) {
        if (h.size() > 1 && h.size() < g.order()) gd.contexts.push_back(make_quotient_context(g, h));
      }
    }
    groups.push_back(std::move(gd));
  }

  std::vector<Instance> instances;
  ScanResult header;
  if (space.exhaustive) {
    std::uint64_t expected = 0;
    std::uint64_t covered = 0;
    for (std::size_t gi = 0; gi < groups.size(); ++gi) {
      const auto& g = groups[gi].g;
      const std::size_t n = g.order();
      const std::size_t hi = std::min(space.max_size, n);
      for (std::size_t k = space.min_size; k <= hi; ++k) expected += binomial(n, k);
      const std::uint32_t full = n == 32 ? 0xFFFFFFFFu : ((1u << n) - 1);
      for (std::uint64_t mask = 1; mask <= full; ++mask) {
        const auto pc = static_cast<std::size_t>(std::popcount(mask));
        if (pc < space.min_size || pc > hi) continue;
        std::vector<Index> members;
        for (std::size_t x = 0; x < n; ++x) {
          if (mask >> x & 1u) members.push_back(x);
        }
        if (members.front() != 0) continue;  // the canonical translate always contains 0
        const GroupSet a(g, members);
        auto canon = canonical_translate(a);
        if (canon != members) continue;
        std::uint64_t stab = 0;
        for (Index b : members) {
          std::vector<Index> tr;
          for (Index x : members) tr.push_back(g.sub(x, b));
          std::sort(tr.begin(), tr.end());
          stab += tr == members;
        }
        Instance inst{gi, std::move(members), n / stab, mix_seed(seed, (gi << 40) ^ mask)};
        covered += inst.weight;
        instances.push_back(std::move(inst));
      }
    }
    header.expected_instances = expected;
    header.count_audit_ok = covered == expected;
    header.instances = covered;
  } else {
    for (std::size_t gi = 0; gi < groups.size(); ++gi) {
      const auto& g = groups[gi].g;
      const std::size_t n = g.order();
      const std::size_t hi = std::min(space.max_size, n);
      if (space.min_size > hi) continue;
      for (std::size_t s = 0; s < space.samples; ++s) {
        const std::uint64_t inst_seed = mix_seed(seed, (static_cast<std::uint64_t>(gi) << 40) + s);
        std::mt19937_64 gen(inst_seed);
        const std::size_t size = space.min_size + draw_below(gen, hi - space.min_size + 1);
        std::vector<Index> pool(n);
        for (std::size_t i = 0; i < n; ++i) pool[i] = i;
        for (std::size_t i = 0; i < size; ++i) std::swap(pool[i], pool[i + draw_below(gen, n - i)]);
        pool.resize(size);
        std::sort(pool.begin(), pool.end());
        instances.push_back({gi, canonical_translate(GroupSet(g, pool)), 1, inst_seed});
      }
    }
    header.instances = instances.size();
  }

  const unsigned nw = std::max(1u, std::min<unsigned>(workers ? workers : worker_count(),
                                                      static_cast<unsigned>(std::max<std::size_t>(1, instances.size()))));
  std::vector<Collector> collectors(nw, Collector(space.max_examples));
  std::atomic<std::size_t> next{0};
  std::vector<std::exception_ptr> errors(nw);
  auto run = [&](unsigned id) {
    try {
      for (std::size_t i = next++; i < instances.size(); i = next++) {
        const auto& inst = instances[i];
        evaluate(inst, groups[inst.group_index], space, cfg, collectors[id]);
      }
    } catch (...) {
      errors[id] = std::current_exception();
      next = instances.size();
    }
  };
  if (nw == 1) {
    run(0);
  } else {
    std::vector<std::thread> pool;
    for (unsigned id = 0; id < nw; ++id) pool.emplace_back(run, id);
    for (auto& th : pool) th.join();
  }
  for (auto& e : errors) {
    if (e) std::rethrow_exception(e);
  }
  for (unsigned id = 1; id < nw; ++id) collectors[0].merge(std::move(collectors[id]));
  ScanResult out = std::move(collectors[0]).finish();
  out.instances = header.instances;
  out.expected_instances = header.expected_instances;
  out.count_audit_ok = header.count_audit_ok;
  return out;
}

}  // namespace addcomb
