// Acceptance run: one PASS/FAIL line per criterion.
//
// Usage: addcomb_acceptance [criterion numbers...]   (default: all ten)
// Exit status is nonzero when a criterion fails that is not listed in kDocumentedFailures.

#include <algorithm>
#include <bit>
#include <chrono>
#include <complex>
#include <cmath>
#include <cstdint>
#include <cstdio>
#include <functional>
#include <map>
#include <numbers>
#include <numeric>
#include <random>
#include <set>
#include <string>
#include <vector>

#include "addcomb/report.hpp"

using namespace addcomb;

namespace {

using Mask = std::uint32_t;

// Criteria whose stated form cannot hold; they still run in full and print their measured values.
const std::map<int, std::string> kDocumentedFailures = {
    {6, "the plain average-to-individual identity equates mean ||g - tau_x g||^2 with E, but the two differ by "
        "|G| sum |g^|^2 (1 - |b|^2) >= 0; the corrected identity is checked instead and the plain residual reported"},
};

struct Outcome {
  bool pass = false;
  std::string detail;
};

class Timer {
 public:
  double seconds() const { return std::chrono::duration<double>(std::chrono::steady_clock::now() - start_).count(); }

 private:
  std::chrono::steady_clock::time_point start_ = std::chrono::steady_clock::now();
};

std::string fmt(const char* f, double v) {
  char buf[64];
  std::snprintf(buf, sizeof buf, f, v);
  return buf;
}

// ---- cyclic bitmask helpers (N <= 24) --------------------------------------------------------------

Mask full_mask(unsigned n) { return n == 32 ? ~Mask{0} : (Mask{1} << n) - 1; }

Mask rotate(Mask m, unsigned s, unsigned n) {
  s %= n;
  if (s == 0) return m;
  return ((m << s) | (m >> (n - s))) & full_mask(n);
}

Mask reflect(Mask m, unsigned n) {
  Mask r = 0;
  for (unsigned x = 0; x < n; ++x)
    if (m >> x & 1) r |= Mask{1} << ((n - x) % n);
  return r;
}

Mask sumset_mask(Mask m, unsigned n) {
  Mask s = 0;
  for (unsigned x = 0; x < n; ++x)
    if (m >> x & 1) s |= rotate(m, x, n);
  return s;
}

// E(A) = sum_s r(s)^2 with r(s) = |A cap (s - A)|.
std::int64_t energy_mask(Mask m, unsigned n) {
  const Mask ref = reflect(m, n);
  std::int64_t e = 0;
  for (unsigned s = 0; s < n; ++s) {
    const auto r = std::popcount(m & rotate(ref, s, n));
    e += static_cast<std::int64_t>(r) * r;
  }
  return e;
}

std::vector<Index> members_of(Mask m) {
  std::vector<Index> v;
  while (m) {
    v.push_back(static_cast<Index>(std::countr_zero(m)));
    m &= m - 1;
  }
  return v;
}

// Calls f(mask) for every k-subset of {0..n-1}.
template <typename F>
void for_each_k_subset(unsigned n, unsigned k, F&& f) {
  if (k == 0 || k > n) return;
  Mask m = full_mask(k);
  const Mask limit = Mask{1} << n;
  while (m < limit) {
    f(m);
    const Mask c = m & (~m + 1);
    const Mask r = m + c;
    m = (((r ^ m) >> 2) / c) | r;
  }
}

// The criterion-2 space: every subset for N <= 16, |A| <= 8 for 17 <= N <= 24.
unsigned max_size_for(unsigned n) { return n <= 16 ? n : 8; }

template <typename F>
void for_each_scan_set(F&& f) {
  for (unsigned n = 2; n <= 24; ++n) {
    for (unsigned k = 1; k <= max_size_for(n); ++k) for_each_k_subset(n, k, [&](Mask m) { f(n, m); });
  }
}

std::uint64_t binom(unsigned n, unsigned k) {
  std::uint64_t r = 1;
  for (unsigned i = 1; i <= k; ++i) r = r * (n - k + i) / i;
  return r;
}

// ---- criteria ----------------------------------------------------------------------------------------

Outcome criterion1() {
  Timer t;
  const std::vector<std::string> groups{"2",        "8",      "97",          "256",     "997",
                                        "1024",     "4096",   "3,3,3,3,3,3", "4,4,4,4", "6,10,12",
                                        "16,16",    "2,3,5,7", "2,2,2,2,2,2,2,2,2,2,2,2"};
  double worst_parseval = 0, worst_energy = 0;
  std::size_t sets = 0;
  for (std::size_t gi = 0; gi < groups.size(); ++gi) {
    const auto g = GroupSpec::parse(groups[gi]);
    std::mt19937_64 rng(mix_seed(1, gi));
    std::uniform_real_distribution<double> density(0.02, 0.98);
    for (int trial = 0; trial < 1000; ++trial) {
      std::bernoulli_distribution pick(density(rng));
      std::vector<Index> m;
      for (Index x = 0; x < g.order(); ++x)
        if (pick(rng)) m.push_back(x);
      if (m.empty()) m.push_back(0);
      const GroupSet a(g, m);
      const auto f = DensityFunction::indicator(a);
      const auto tab = dft(f);
      worst_parseval = std::max(worst_parseval, parseval_audit(f, tab));
      worst_energy = std::max(worst_energy, additive_energy(a, tab).identity_residual);
      ++sets;
    }
  }
  const double secs = t.seconds();
  Outcome o;
  o.pass = worst_parseval <= 1e-10 && worst_energy <= 1e-8 && secs <= 60;
  o.detail = std::to_string(sets) + " sets over " + std::to_string(groups.size()) +
             " groups; max Parseval residual " + fmt("%.2e", worst_parseval) + ", max energy residual " +
             fmt("%.2e", worst_energy) + ", " + fmt("%.1f", secs) + " s (limit 60 s)";
  return o;
}

struct ExhaustiveTotals {
  std::uint64_t sets = 0;
  std::uint64_t energy_fail = 0;     // library flags or oracle inequality
  std::uint64_t oracle_mismatch = 0; // library energy / sumset differ from the bitmask oracle
  std::uint64_t e2d_checks = 0, e2d_fail = 0;
  std::uint64_t lift_checks = 0, lift_fail = 0, lift_unexpected = 0;
  double worst_ab = 0;
  double seconds = 0;
};

// One pass over the criterion-2 space shared by criteria 2, 3 and 5.
const ExhaustiveTotals& exhaustive_pass() {
  static ExhaustiveTotals tot;
  static bool done = false;
  if (done) return tot;
  Timer t;
  std::vector<std::vector<QuotientContext>> contexts(25);
  for (unsigned n = 2; n <= 24; ++n) {
    const auto g = GroupSpec::cyclic(n);
    for (const auto& h : all_subgroups(g)) contexts[n].push_back(make_quotient_context(g, h));
  }
  for_each_scan_set([&](unsigned n, Mask mask) {
    const auto g = GroupSpec::cyclic(n);
    const GroupSet a(g, members_of(mask));
    const auto tab = transform(a);
    const double alpha = to_double(a.density());
    ++tot.sets;

    const auto e = additive_energy(a, tab);
    const auto size = static_cast<std::int64_t>(a.size());
    const auto e_oracle = energy_mask(mask, n);
    const auto sum_oracle = static_cast<std::int64_t>(std::popcount(sumset_mask(mask, n)));
    if (e.combinatorial != e_oracle || e.doubling != Rational(sum_oracle, size)) ++tot.oracle_mismatch;
    const bool lower = e_oracle * sum_oracle >= size * size * size * size;
    const bool upper = e_oracle <= size * size * size;
    if (!(lower && upper && e.lower_ok && e.upper_ok)) ++tot.energy_fail;

    for (DualElement xi = 1; xi < n; ++xi) {
      ++tot.e2d_checks;
      if (!energy_to_doubling_check(tab, alpha, xi).holds) ++tot.e2d_fail;
    }

    for (const auto& ctx : contexts[n]) {
      const auto lc = quotient_lift_check(a, tab, ctx);
      ++tot.lift_checks;
      tot.worst_ab = std::max(tot.worst_ab, lc.max_ab_residual);
      if (!lc.ab_holds || lc.max_ab_residual > 1e-10) ++tot.lift_fail;
      if (lc.classification == LiftClass::Unexpected) ++tot.lift_unexpected;
    }
  });
  tot.seconds = t.seconds();
  done = true;
  return tot;
}

std::uint64_t expected_scan_sets() {
  std::uint64_t total = 0;
  for (unsigned n = 2; n <= 24; ++n)
    for (unsigned k = 1; k <= max_size_for(n); ++k) total += binom(n, k);
  return total;
}

Outcome criterion2() {
  const auto& t = exhaustive_pass();
  const auto expected = expected_scan_sets();
  Outcome o;
  o.pass = t.sets == expected && t.energy_fail == 0 && t.oracle_mismatch == 0 && t.seconds <= 600;
  o.detail = std::to_string(t.sets) + "/" + std::to_string(expected) + " sets; " + std::to_string(t.energy_fail) +
             " energy-bound failures, " + std::to_string(t.oracle_mismatch) +
             " oracle mismatches; shared pass (criteria 2, 3, 5) " + fmt("%.1f", t.seconds) + " s (limit 600 s)";
  return o;
}

Outcome criterion3() {
  const auto& t = exhaustive_pass();
  const auto g = GroupSpec::cyclic(8);
  const auto worked = energy_to_doubling_check(GroupSet(g, {0, 4}), 2);
  const bool worked_ok = std::abs(worked.eta - 1) < 1e-12 && std::abs(worked.lhs - 1.0 / 64) < 1e-15 &&
                         std::abs(worked.rhs - 1.0 / 128) < 1e-15 && worked.holds;
  Outcome o;
  o.pass = t.e2d_fail == 0 && t.e2d_checks > 0 && worked_ok;
  o.detail = std::to_string(t.e2d_checks - t.e2d_fail) + "/" + std::to_string(t.e2d_checks) +
             " (set, xi) checks hold; {0,4} in Z/8 at xi=2: eta=" + fmt("%.3g", worked.eta) +
             ", sum |f^|^4=" + fmt("%.6g", worked.lhs) + " >= " + fmt("%.6g", worked.rhs);
  return o;
}

Outcome criterion4() {
  Timer t;
  const auto cfg = LedgerConfig::from_preset("ledger-C");
  const auto toy = toy_example(cfg);
  const double secs = t.seconds();

  // Independent recomputation of the magnitudes and of Spec_tau.
  const double alpha = 24.0 / 97.0;
  const double tau = std::pow(3.0, -1.0 / 16);
  double worst = 0;
  std::vector<std::int64_t> spec;
  for (std::int64_t xi = -48; xi <= 48; ++xi) {
    std::complex<double> s = 0;
    for (int x = 0; x < 24; ++x) s += std::polar(1.0, -2 * std::numbers::pi * static_cast<double>(xi * x) / 97);
    const double mag = std::abs(s) / 97;
    const double arg = std::numbers::pi * alpha * static_cast<double>(xi);
    const double sinc = xi == 0 ? 1.0 : std::abs(std::sin(arg) / arg);
    if (sinc >= 0.1) worst = std::max(worst, std::abs(mag - alpha * sinc) / (alpha * sinc));
    if (mag >= tau * alpha * (1 - 1e-12)) spec.push_back(xi);
  }
  const auto half = spec.empty() ? 0 : spec.back();
  bool interval = !spec.empty() && spec.front() == -half;
  for (std::size_t i = 0; i + 1 < spec.size(); ++i) interval = interval && spec[i + 1] == spec[i] + 1;

  Outcome o;
  o.pass = toy.sumset_size == 47 && toy.sumset_size <= 3 * 24 && toy.sinc_ok && worst <= 0.05 &&
           toy.spectrum_symmetric_interval && interval && toy.spectrum == spec && secs <= 1.0;
  o.detail = "|A+A|=" + std::to_string(toy.sumset_size) + " <= 72; max sinc relative error " + fmt("%.4f", worst) +
             " (library " + fmt("%.4f", toy.sinc_max_relative_error) + "); Spec_tau has " +
             std::to_string(spec.size()) + " frequencies, [-" + std::to_string(half) + ", " + std::to_string(half) +
             "]; " + fmt("%.3f", secs) + " s (limit 1 s)";
  return o;
}

Outcome criterion5() {
  const auto& t = exhaustive_pass();
  const auto cfg = LedgerConfig::from_preset("ledger-C");
  const auto g = GroupSpec::cyclic(12);
  const auto direct = quotient_lift_check(GroupSet(g, {0, 1}), enumerate_subgroup(g, std::vector<Element>{6}));
  ScanSpace space;
  space.groups = {g};
  space.exhaustive = true;
  space.min_size = 2;
  space.max_size = 2;
  space.max_examples = 1000;
  space.packets = false;
  space.iteration = false;
  const auto scan = scan_for_violations(space, cfg, cfg.seed, 1);
  bool recorded = false;
  for (const auto& f : scan.findings) {
    if (f.lemma != "exact-quotient-indicator" || f.set != std::vector<Element>{0, 1}) continue;
    for (const auto& m : f.measured) {
      if (m.name == "kernel" && m.value == "0,6") recorded = recorded || f.severity == Severity::ErratumClass;
    }
  }
  Outcome o;
  o.pass = t.lift_fail == 0 && t.lift_unexpected == 0 && t.lift_checks > 0 &&
           direct.classification == LiftClass::IndicatorDiscrepancy && recorded;
  o.detail = std::to_string(t.lift_checks - t.lift_fail) + "/" + std::to_string(t.lift_checks) +
             " (set, H') lifts agree, max residual " + fmt("%.2e", t.worst_ab) + ", " +
             std::to_string(t.lift_unexpected) + " unexpected; {0,1} in Z/12, H'={0,6}: " +
             to_string(direct.classification) + (recorded ? ", recorded as erratum-class" : ", NOT recorded");
  return o;
}

Outcome criterion6() {
  Timer t;
  const auto g = GroupSpec::cyclic(997);
  std::vector<Index> m(100);
  std::iota(m.begin(), m.end(), Index{0});
  const GroupSet a(g, m);
  // S: the five largest nonzero coefficients of 1_A (ties by label).
  const auto tab = transform(a);
  std::vector<DualElement> order(996);
  std::iota(order.begin(), order.end(), DualElement{1});
  std::stable_sort(order.begin(), order.end(),
                   [&](DualElement x, DualElement y) { return tab.magnitude(x) > tab.magnitude(y); });
  const std::vector<DualElement> s(order.begin(), order.begin() + 5);

  int successes = 0, identity_ok = 0, corrected_ok = 0, shifts_ok = 0, markov_ok = 0;
  double worst_printed = 0, worst_corrected = 0;
  for (int trial = 0; trial < 100; ++trial) {
    const auto p = sample_packet(g, s, 0.2, 0.05, mix_seed(6, static_cast<std::uint64_t>(trial)));
    successes += p.success;
    const auto r = good_shifts(a, p);
    worst_printed = std::max(worst_printed, r.printed_identity_residual);
    worst_corrected = std::max(worst_corrected, r.corrected_identity_residual);
    identity_ok += r.printed_identity_residual <= 1e-8;
    corrected_ok += r.corrected_identity_residual <= 1e-8;
    shifts_ok += r.contract_holds;
    markov_ok += r.markov_holds;
  }
  const double secs = t.seconds();
  Outcome o;
  o.pass = successes >= 90 && identity_ok == 100 && shifts_ok == 100 && secs <= 120;
  o.detail = "S=" + std::to_string(s[0]) + "," + std::to_string(s[1]) + "," + std::to_string(s[2]) + "," +
             std::to_string(s[3]) + "," + std::to_string(s[4]) + ", |T|=" +
             std::to_string(packet_size(5, 0.2, 0.05, 2.0)) + "; " + std::to_string(successes) +
             "/100 packets succeed; plain identity holds " + std::to_string(identity_ok) + "/100 (max residual " +
             fmt("%.3g", worst_printed) + "); corrected identity " + std::to_string(corrected_ok) +
             "/100 (max " + fmt("%.2e", worst_corrected) + "); |X|>=|T|/2 with X={d<=2E} " +
             std::to_string(shifts_ok) + "/100, with X={d<=2 mean d} " + std::to_string(markov_ok) + "/100; " +
             fmt("%.1f", secs) + " s (limit 120 s)";
  return o;
}

Outcome criterion7() {
  Timer t;
  const auto z97 = GroupSpec::cyclic(97);
  const auto b = bohr_set(z97, std::vector<DualElement>{1}, 0.1);
  const bool exact = b.elements.members() == std::vector<Index>{0, 1, 96};
  const bool oracle = 2 * std::sin(std::numbers::pi / 97) <= 0.1 && 2 * std::sin(2 * std::numbers::pi / 97) > 0.1;

  std::uint64_t pairs = 0, violations = 0;
  std::vector<double> grid(32);
  for (int i = 0; i < 32; ++i) grid[i] = 2.0 * i / 31;
  for (unsigned n = 2; n <= 64; ++n) {
    const auto g = GroupSpec::cyclic(n);
    auto check = [&](const std::vector<DualElement>& gamma) {
      const BohrProfile profile(g, gamma);
      std::vector<Index> prev;
      for (double rho : grid) {
        std::vector<Index> cur;
        for (Index x = 0; x < n; ++x)
          if (profile.radii()[x] <= rho + 1e-12) cur.push_back(x);
        if (!std::includes(cur.begin(), cur.end(), prev.begin(), prev.end())) ++violations;
        if (cur.size() != profile.count(rho)) ++violations;
        ++pairs;
        prev = std::move(cur);
      }
    };
    check({});
    for (DualElement x = 0; x < n; ++x) check({x});
    for (DualElement x = 0; x < n; ++x)
      for (DualElement y = x + 1; y < n; ++y) check({x, y});
  }
  // Spot check the profile radii against bohr_set itself.
  for (unsigned n : {7u, 30u, 64u}) {
    const auto g = GroupSpec::cyclic(n);
    const std::vector<DualElement> gamma{1, 3};
    for (double rho : grid) {
      if (bohr_set(g, gamma, rho).elements.size() != BohrProfile(g, gamma).count(rho)) ++violations;
    }
  }

  const auto cfg = LedgerConfig::from_preset("ledger-C");
  std::vector<Index> m(24);
  std::iota(m.begin(), m.end(), Index{0});
  const auto pb = polybog_search(GroupSet(z97, m), cfg);
  const bool everything = 8 * 23 + 1 > 97 && pb.four_a_minus_four_a.size() == 97;

  Outcome o;
  o.pass = exact && oracle && violations == 0 && everything && pb.rho_prime == 2.0;
  o.detail = std::string("B({1},0.1)=") + (exact ? "{-1,0,1}" : "WRONG") + "; " + std::to_string(pairs) +
             " (Gamma, rho) pairs over Z/N, N<=64, |Gamma|<=2, monotone with " + std::to_string(violations) +
             " violations; toy polybog rho'=" + fmt("%.17g", pb.rho_prime) + ", |4A-4A|=" +
             std::to_string(pb.four_a_minus_four_a.size()) + "; " + fmt("%.1f", t.seconds()) + " s";
  return o;
}

struct LedgerTotals {
  std::uint64_t traces = 0;        // weighted by orbit size
  std::uint64_t improvements = 0;  // weighted
  std::uint64_t increases = 0, unflagged = 0, below_one = 0, over_budget = 0, unflagged_budget = 0;
};

void audit_trace(const IterationTrace& tr, std::uint64_t w, LedgerTotals& t) {
  auto has = [&](const char* lemma) {
    return std::any_of(tr.findings.begin(), tr.findings.end(), [&](const auto& f) { return f.lemma == lemma; });
  };
  t.traces += w;
  for (std::size_t j = 0; j < tr.steps.size(); ++j) {
    const auto& s = tr.steps[j];
    if (!(s.potential >= 1.0 - 1e-12)) t.below_one += w;
    if (s.outcome == "improvement") {
      t.improvements += w;
      if (j + 1 < tr.steps.size() && tr.steps[j + 1].potential > s.potential) {
        t.increases += w;
        if (!has("potential-monotonicity")) t.unflagged += w;
      }
    }
  }
  if (tr.steps.size() > tr.budget) t.over_budget += w;
  const bool ran_out = tr.steps.size() == tr.budget && !tr.steps.empty() && tr.steps.back().outcome == "improvement";
  if (ran_out && (tr.terminal != "budget-exhausted" || !has("iteration-budget"))) t.unflagged_budget += w;
}

Outcome criterion8() {
  Timer t;
  auto steep = LedgerConfig::from_preset("ledger-C");
  steep.c = 2.0;  // moves many sets out of the concentrated branch so the improvement path is exercised
  const std::vector<std::pair<std::string, LedgerConfig>> configs{
      {"ledger-C", LedgerConfig::from_preset("ledger-C")},
      {"ledger-S2", LedgerConfig::from_preset("ledger-S2")},
      {"ledger-C,c=2", steep}};
  std::vector<LedgerTotals> totals(configs.size());
  std::uint64_t sets = 0;
  for_each_scan_set([&](unsigned n, Mask mask) {
    ++sets;
    const GroupSet a(GroupSpec::cyclic(n), members_of(mask));
    for (std::size_t c = 0; c < configs.size(); ++c) audit_trace(iterate_psl(a, configs[c].second), 1, totals[c]);
  });

  bool ok = sets == expected_scan_sets();
  std::string detail = std::to_string(sets) + " sets; ";
  for (std::size_t c = 0; c < configs.size(); ++c) {
    const auto& x = totals[c];
    ok = ok && x.traces == sets && x.unflagged == 0 && x.below_one == 0 && x.over_budget == 0 &&
         x.unflagged_budget == 0;
    detail += configs[c].first + ": " + std::to_string(x.improvements) + " improvement steps, " +
              std::to_string(x.increases) + " increases (" + std::to_string(x.unflagged) + " unflagged), I<1 " +
              std::to_string(x.below_one) + ", over budget " + std::to_string(x.over_budget) + "; ";
  }
  detail += fmt("%.1f", t.seconds()) + " s";
  return {ok, detail};
}

Outcome criterion9() {
  Timer t;
  const auto cfg = LedgerConfig::from_preset("ledger-C");
  auto run = [&](unsigned workers) {
    ScanSpace space;
    space.groups = {GroupSpec::parse("64"), GroupSpec::parse("97"), GroupSpec::parse("3,3,3")};
    space.samples = 200;
    const auto r = scan_for_violations(space, cfg, 42, workers);
    Json f = Json::array();
    for (const auto& x : r.findings) f.push_back(to_json(x));
    return f.dump(2);
  };
  const auto first = run(1);
  const auto second = run(std::max(2u, worker_count()));
  Outcome o;
  o.pass = first == second && first.size() > 2;
  o.detail = std::to_string(first.size()) + "-byte findings array, " + (first == second ? "identical" : "DIFFERENT") +
             " across two runs (1 and " + std::to_string(std::max(2u, worker_count())) + " workers); " +
             fmt("%.1f", t.seconds()) + " s";
  return o;
}

// Least doubling over subsets of `mask` with at least `min_size` elements, by bitmask enumeration.
Rational best_doubling(Mask mask, unsigned n, unsigned min_size) {
  const auto idx = members_of(mask);
  Rational best(1000000);
  const unsigned k = static_cast<unsigned>(idx.size());
  for (Mask sub = 1; sub < (Mask{1} << k); ++sub) {
    if (static_cast<unsigned>(std::popcount(sub)) < min_size) continue;
    Mask s = 0;
    for (unsigned i = 0; i < k; ++i)
      if (sub >> i & 1) s |= Mask{1} << idx[i];
    best = std::min(best, Rational(std::popcount(sumset_mask(s, n)), std::popcount(s)));
  }
  return best;
}

Outcome criterion10() {
  Timer t;
  // bsg_extract commutes with x -> u x + t for units u, so one representative per affine orbit suffices:
  // the least mask among all u (A - a), a in A. Orbit sizes come from stabiliser counts and are audited
  // against the number of subsets.
  std::uint64_t reps = 0, weighted_sets = 0, expected = 0, qualifying = 0, qualifying_reps = 0;
  std::uint64_t failures = 0, oracle_mismatch = 0, errors = 0, proper = 0;
  double worst_ratio = 0;
  for (unsigned n = 2; n <= 24; ++n) {
    std::vector<unsigned> units;
    for (unsigned u = 1; u <= n; ++u)
      if (std::gcd(u, n) == 1) units.push_back(u % n);
    const auto g = GroupSpec::cyclic(n);
    const unsigned kmax = std::min(10u, n);
    for (unsigned k = 1; k <= kmax; ++k) {
      expected += binom(n, k);
      // Sets containing 0: the low bit plus k-1 of the remaining n-1 positions.
      auto visit = [&](Mask rest) {
        const Mask mask = (rest << 1) | 1;
        const auto idx = members_of(mask);
        std::uint64_t stab = 0;
        for (unsigned u : units) {
          for (auto a : idx) {
            Mask img = 0;
            for (auto x : idx) img |= Mask{1} << ((u * ((x + n - a) % n)) % n);
            if (img < mask) return;
            if (img == mask) ++stab;
          }
        }
        const std::uint64_t orbit = static_cast<std::uint64_t>(n) * units.size() / stab;
        ++reps;
        weighted_sets += orbit;
        const auto e = energy_mask(mask, n);
        const auto size = static_cast<std::int64_t>(k);
        // boost = E N / |A|^4 - 1 >= 1/4
        if (4 * e * static_cast<std::int64_t>(n) < 5 * size * size * size * size) return;
        qualifying += orbit;
        ++qualifying_reps;
        try {
          const auto r = bsg_extract(GroupSet(g, idx), 0.25);
          const unsigned a0_size = static_cast<unsigned>(r.a0.size());
          if (a0_size < k) proper += orbit;
          Mask a0 = 0;
          for (auto x : r.a0.members()) a0 |= Mask{1} << x;
          const auto oracle = best_doubling(mask, n, a0_size);
          const Rational k0(std::popcount(sumset_mask(a0, n)), static_cast<std::int64_t>(a0_size));
          if (!r.oracle_doubling || *r.oracle_doubling != oracle || r.doubling_a0 != k0) ++oracle_mismatch;
          worst_ratio = std::max(worst_ratio, to_double(k0 / oracle));
          if (k0 > oracle * 2) ++failures;
        } catch (const std::exception&) {
          ++errors;
        }
      };
      if (k == 1) {
        visit(0);
      } else {
        for_each_k_subset(n - 1, k - 1, visit);
      }
    }
  }
  // Direct runs on random members of the space, without the orbit reduction.
  std::mt19937_64 rng(10);
  std::uint64_t direct = 0, direct_fail = 0;
  while (direct < 5000) {
    const unsigned n = 2 + static_cast<unsigned>(rng() % 23);
    const unsigned k = 1 + static_cast<unsigned>(rng() % std::min(10u, n));
    Mask mask = 0;
    while (static_cast<unsigned>(std::popcount(mask)) < k) mask |= Mask{1} << (rng() % n);
    const auto size = static_cast<std::int64_t>(k);
    if (4 * energy_mask(mask, n) * static_cast<std::int64_t>(n) < 5 * size * size * size * size) continue;
    ++direct;
    try {
      const auto r = bsg_extract(GroupSet(GroupSpec::cyclic(n), members_of(mask)), 0.25);
      Mask a0 = 0;
      for (auto x : r.a0.members()) a0 |= Mask{1} << x;
      const Rational k0(std::popcount(sumset_mask(a0, n)), static_cast<std::int64_t>(r.a0.size()));
      if (k0 > best_doubling(mask, n, static_cast<unsigned>(r.a0.size())) * 2) ++direct_fail;
    } catch (const std::exception&) {
      ++direct_fail;
    }
  }
  const double secs = t.seconds();
  Outcome o;
  o.pass = weighted_sets == expected && direct_fail == 0 && failures == 0 && oracle_mismatch == 0 && errors == 0 && secs <= 900;
  o.detail = std::to_string(weighted_sets) + "/" + std::to_string(expected) + " sets via " + std::to_string(reps) +
             " affine orbits; " + std::to_string(qualifying) + " with boost >= 1/4 (" +
             std::to_string(qualifying_reps) + " orbits, " + std::to_string(proper) + " with A0 a proper subset); " + std::to_string(failures) +
             " exceed 2x oracle, " +
             std::to_string(oracle_mismatch) + " oracle mismatches, " + std::to_string(errors) +
             " errors; worst ratio " + fmt("%.4f", worst_ratio) + "; direct sample " +
             std::to_string(direct - direct_fail) + "/" + std::to_string(direct) + "; " + fmt("%.1f", secs) + " s (limit 900 s)";
  return o;
}

}  // namespace

int main(int argc, char** argv) {
  const std::vector<std::function<Outcome()>> criteria{criterion1, criterion2, criterion3, criterion4, criterion5,
                                                       criterion6, criterion7, criterion8, criterion9, criterion10};
  std::set<int> selected;
  for (int i = 1; i < argc; ++i) selected.insert(std::stoi(argv[i]));
  if (selected.empty())
    for (int i = 1; i <= 10; ++i) selected.insert(i);

  int unexpected = 0;
  for (int id : selected) {
    if (id < 1 || id > 10) {
      std::fprintf(stderr, "unknown criterion %d\n", id);
      return 2;
    }
    Timer t;
    Outcome o;
    try {
      o = criteria[static_cast<std::size_t>(id - 1)]();
    } catch (const std::exception& e) {
      o = {false, std::string("exception: ") + e.what()};
    }
    const auto doc = kDocumentedFailures.find(id);
    std::string status = o.pass ? "PASS" : "FAIL";
    if (!o.pass && doc != kDocumentedFailures.end()) status += " (documented: " + doc->second + ")";
    if (!o.pass && doc == kDocumentedFailures.end()) ++unexpected;
    std::printf("criterion %2d: %s | %s [%.1f s]\n", id, status.c_str(), o.detail.c_str(), t.seconds());
    std::fflush(stdout);
  }
  return unexpected == 0 ? 0 : 1;
}
