#include <doctest.h>

#include <cstdlib>

#include "addcomb/harness.hpp"

using namespace addcomb;

namespace {

std::uint64_t binom(std::uint64_t n, std::uint64_t k) {
  std::uint64_t r = 1;
  for (std::uint64_t i = 1; i <= k; ++i) r = r * (n - k + i) / i;
  return r;
}

}  // namespace

TEST_SUITE("harness") {
  TEST_CASE("potential") {
    CHECK(potential(Rational(1), Rational(1), 9.0) == doctest::Approx(1));
    CHECK(potential(Rational(2), Rational(1, 2), 2.0) == doctest::Approx(8));
    CHECK_THROWS_AS(potential(Rational(2), Rational(0), 2.0), std::invalid_argument);
  }

  TEST_CASE("severity names round trip") {
    for (auto s : {Severity::ErratumClass, Severity::DecrementMiss, Severity::BoundMiss}) {
      CHECK(parse_severity(to_string(s)) == s);
    }
    CHECK(std::string(to_string(Severity::ErratumClass)) == "erratum-class");
    CHECK_THROWS(parse_severity("minor"));
  }

  TEST_CASE("real formatting keeps 17 digits") {
    CHECK(format_real(0.1) == "0.10000000000000001");
    CHECK(format_real(std::numeric_limits<double>::infinity()) == "inf");
  }

  TEST_CASE("iterating on a subgroup stops at once") {
    const auto cfg = LedgerConfig::from_preset("ledger-C");
    const auto g = GroupSpec::cyclic(24);
    const GroupSet h(g, {0, 8, 16});
    const auto trace = iterate_psl(h, cfg);
    REQUIRE(trace.steps.size() == 1);
    CHECK(trace.terminal == "near-coset");
    CHECK(trace.total_codim == 0);
    CHECK(trace.steps[0].potential == doctest::Approx(potential(Rational(1), Rational(1, 8), cfg.gamma)));
    REQUIRE(trace.near_coset.has_value());
    CHECK(trace.near_coset->covered_fraction == Rational(1));
  }

  TEST_CASE("default budget") {
    const auto cfg = LedgerConfig::from_preset("ledger-C");
    CHECK(default_budget(Rational(3), cfg) == static_cast<std::size_t>(std::ceil(std::pow(3.0, 1.25))));
    CHECK(default_budget(Rational(1), cfg) == 1);
  }

  TEST_CASE("iteration ledger invariants on a scan of Z/16") {
    const auto g = GroupSpec::cyclic(16);
    for (const auto* preset : {"ledger-C", "ledger-S2"}) {
      const auto cfg = LedgerConfig::from_preset(preset);
      for (std::uint32_t mask = 1; mask < (1u << 16); mask += 211) {
        std::vector<Index> m;
        for (Index x = 0; x < 16; ++x)
          if (mask >> x & 1) m.push_back(x);
        const GroupSet a(g, m);
        const auto trace = iterate_psl(a, cfg);
        REQUIRE_FALSE(trace.steps.empty());
        CHECK(trace.steps.size() <= trace.budget);
        for (std::size_t j = 0; j < trace.steps.size(); ++j) {
          const auto& s = trace.steps[j];
          CHECK(s.potential >= 1.0 - 1e-12);
          CHECK(s.potential == doctest::Approx(potential(s.k, s.alpha, cfg.gamma)));
          if (j + 1 < trace.steps.size() && trace.steps[j + 1].potential > s.potential) {
            bool flagged = false;
            for (const auto& f : trace.findings) flagged = flagged || f.lemma == "potential-monotonicity";
            CHECK(flagged);
          }
        }
      }
    }
  }

  TEST_CASE("budget exhaustion is a finding") {
    // A steep regime exponent moves this set out of the concentrated branch and its first step improves.
    auto cfg = LedgerConfig::from_preset("ledger-C");
    cfg.c = 2.0;
    const auto g = GroupSpec::cyclic(64);
    const GroupSet a(g, {6, 14, 15, 31, 35, 43, 46, 49, 63});
    const auto full = iterate_psl(a, cfg);
    REQUIRE(full.steps.size() >= 2);
    CHECK(full.steps[0].outcome == "improvement");
    REQUIRE(full.steps[0].delta.has_value());
    CHECK(*full.steps[0].delta > Rational(0));
    CHECK(full.steps[1].k == full.steps[0].k - *full.steps[0].delta);
    CHECK(full.total_codim > 0);
    const auto capped = iterate_psl(a, cfg, std::size_t{1});
    CHECK(capped.terminal == "budget-exhausted");
    bool flagged = false;
    for (const auto& f : capped.findings) flagged = flagged || f.lemma == "iteration-budget";
    CHECK(flagged);
  }

  TEST_CASE("toy example") {
    const auto cfg = LedgerConfig::from_preset("ledger-C");
    const auto toy = toy_example(cfg);
    CHECK(toy.a.size() == 24);
    CHECK(toy.sumset_size == 47);
    CHECK(toy.k == Rational(47, 24));
    CHECK(toy.doubling_ok);
    CHECK(toy.sinc_ok);
    CHECK(toy.sinc_max_relative_error <= 0.05);
    CHECK(toy.spectrum_symmetric_interval);
    CHECK(toy.tau == doctest::Approx(std::pow(3.0, -1.0 / 16)));
    CHECK(toy.polybog.rho_prime == doctest::Approx(2.0));
    CHECK_THROWS(toy_example(cfg, 0.3));
    const auto five = toy_example(cfg, 24.0 / 97.0, 5);
    CHECK(five.tau == doctest::Approx(std::pow(5.0, -1.0 / 16)));
  }

  TEST_CASE("gray zone check is inapplicable for concentrated sets") {
    const auto cfg = LedgerConfig::from_preset("ledger-C");
    const auto g = GroupSpec::cyclic(12);
    const auto r = gray_zone_check(GroupSet(g, {0, 4, 8}), cfg);
    CHECK_FALSE(r.applicable);
  }

  TEST_CASE("almost periods on a random set") {
    const auto cfg = LedgerConfig::from_preset("ledger-C");
    const auto g = GroupSpec::cyclic(97);
    const GroupSet a(g, {0, 1, 2, 3, 4, 10, 20, 33, 51, 70});
    const auto r = almost_periods(a, cfg, 99);
    CHECK(r.shifts.corrected_identity_residual <= kIdentityTolerance);
    CHECK(r.l2.sound_holds);
    CHECK(r.in_difference_fraction >= 0);
    CHECK(r.in_difference_fraction <= 1);
    const auto again = almost_periods(a, cfg, 99);
    CHECK(again.packet.members == r.packet.members);
  }

  TEST_CASE("canonical translate and seed mixing") {
    const auto g = GroupSpec::cyclic(10);
    CHECK(canonical_translate(GroupSet(g, {3, 5})) == std::vector<Element>{0, 2});
    CHECK(canonical_translate(GroupSet(g, {0, 8})) == std::vector<Element>{0, 2});
    CHECK(mix_seed(1, 2) == mix_seed(1, 2));
    CHECK(mix_seed(1, 2) != mix_seed(1, 3));
    CHECK(mix_seed(1, 2) != mix_seed(2, 2));
  }

  TEST_CASE("worker count honours the environment") {
    setenv("ADDCOMB_WORKERS", "3", 1);
    CHECK(worker_count() == 3);
    unsetenv("ADDCOMB_WORKERS");
    CHECK(worker_count() >= 1);
  }

  TEST_CASE("exhaustive scan count audit") {
    const auto cfg = LedgerConfig::from_preset("ledger-C");
    ScanSpace space;
    space.groups = {GroupSpec::cyclic(8), GroupSpec::parse("2,2,2")};
    space.exhaustive = true;
    space.min_size = 1;
    space.max_size = 4;
    space.packets = false;
    const auto r = scan_for_violations(space, cfg, 42, 2);
    std::uint64_t expected = 0;
    for (int k = 1; k <= 4; ++k) expected += 2 * binom(8, static_cast<std::uint64_t>(k));
    REQUIRE(r.expected_instances.has_value());
    CHECK(*r.expected_instances == expected);
    CHECK(r.count_audit_ok);
    for (const auto& t : r.tallies) {
      if (t.lemma == "energy-lower" || t.lemma == "energy-upper" || t.lemma == "e2d") CHECK(t.violations == 0);
    }
    space.max_size = 11;
    CHECK_THROWS_AS(scan_for_violations(space, cfg, 42, 1), BudgetError);
  }

  TEST_CASE("sampled scan is deterministic across worker counts") {
    const auto cfg = LedgerConfig::from_preset("ledger-C");
    ScanSpace space;
    space.groups = {GroupSpec::cyclic(64), GroupSpec::parse("3,3,3")};
    space.samples = 25;
    space.max_size = 8;
    const auto one = scan_for_violations(space, cfg, 42, 1);
    const auto three = scan_for_violations(space, cfg, 42, 3);
    CHECK(one.findings == three.findings);
    CHECK(one.instances == three.instances);
    REQUIRE(one.tallies.size() == three.tallies.size());
    for (std::size_t i = 0; i < one.tallies.size(); ++i) {
      CHECK(one.tallies[i].lemma == three.tallies[i].lemma);
      CHECK(one.tallies[i].violations == three.tallies[i].violations);
    }
    CHECK(std::is_sorted(one.findings.begin(), one.findings.end()));
    const auto other = scan_for_violations(space, cfg, 43, 1);
    CHECK_FALSE(other.findings == one.findings);
  }

  TEST_CASE("scan finds the known errata") {
    const auto cfg = LedgerConfig::from_preset("ledger-C");
    ScanSpace space;
    space.groups = {GroupSpec::cyclic(12)};
    space.exhaustive = true;
    space.min_size = 2;
    space.max_size = 2;
    const auto r = scan_for_violations(space, cfg, 7, 1);
    bool indicator = false, energy_form = false;
    for (const auto& f : r.findings) {
      indicator = indicator || f.lemma == "exact-quotient-indicator";
      energy_form = energy_form || f.lemma == "energy-printed-form";
      CHECK(f.set.size() == 2);
    }
    CHECK(indicator);
    CHECK(energy_form);
  }
}
