#include <doctest.h>

#include <random>

#include "addcomb/fourier.hpp"

using namespace addcomb;

namespace {

GroupSet random_set(const GroupSpec& g, std::mt19937_64& rng, double p) {
  std::bernoulli_distribution pick(p);
  std::vector<Index> m;
  for (Index x = 0; x < g.order(); ++x)
    if (pick(rng)) m.push_back(x);
  if (m.empty()) m.push_back(0);
  return GroupSet(g, m);
}

// Quadruple count by brute force.
std::int64_t energy_oracle(const GroupSet& a) {
  const auto& g = a.group();
  std::int64_t e = 0;
  for (auto x : a.members())
    for (auto y : a.members())
      for (auto z : a.members()) {
        const auto w = g.sub(g.add(x, y), z);
        if (a.contains(w)) ++e;
      }
  return e;
}

double max_diff(const FourierTable& a, const FourierTable& b) {
  double m = 0;
  for (std::size_t i = 0; i < a.coeffs.size(); ++i) m = std::max(m, std::abs(a.coeffs[i] - b.coeffs[i]));
  return m;
}

}  // namespace

TEST_SUITE("fourier") {
  TEST_CASE("transform matches direct summation") {
    std::mt19937_64 rng(7);
    for (const char* lit : {"1", "2", "12", "97", "3,3,3", "2,6", "4,4,2", "64"}) {
      const auto g = GroupSpec::parse(lit);
      const auto a = random_set(g, rng, 0.4);
      const auto f = DensityFunction::indicator(a);
      CHECK(max_diff(dft(f), dft_direct(f)) < 1e-12);
    }
  }

  TEST_CASE("zero coefficient is the density") {
    const auto g = GroupSpec::cyclic(97);
    const GroupSet a(g, {0, 1, 2, 3, 4, 5});
    const auto t = transform(a);
    CHECK(t[0].real() == doctest::Approx(6.0 / 97).epsilon(1e-14));
    CHECK(std::abs(t[0].imag()) < 1e-15);
  }

  TEST_CASE("inverse transform recovers the function") {
    std::mt19937_64 rng(11);
    const auto g = GroupSpec::parse("3,5");
    const auto a = random_set(g, rng, 0.5);
    const auto f = DensityFunction::indicator(a);
    const auto back = idft(dft(f));
    for (Index x = 0; x < g.order(); ++x) CHECK(std::abs(back.values[x] - f.values[x]) < 1e-12);
  }

  TEST_CASE("Parseval residual") {
    std::mt19937_64 rng(3);
    for (const char* lit : {"256", "997", "4,4,4", "2,2,2,2,2,2,2,2"}) {
      const auto g = GroupSpec::parse(lit);
      const auto f = DensityFunction::indicator(random_set(g, rng, 0.3));
      CHECK(parseval_audit(f) <= 1e-10);
    }
  }

  TEST_CASE("convolution theorem") {
    std::mt19937_64 rng(5);
    const auto g = GroupSpec::parse("4,6");
    const auto f = DensityFunction::indicator(random_set(g, rng, 0.4));
    const auto h = DensityFunction::indicator(random_set(g, rng, 0.4));
    const auto fast = convolve(f, h);
    const auto slow = convolve_direct(f, h);
    for (Index x = 0; x < g.order(); ++x) CHECK(std::abs(fast.values[x] - slow.values[x]) < 1e-10);
    const auto tf = dft(f), th = dft(h), tc = dft(slow);
    const double n = static_cast<double>(g.order());
    for (Index xi = 0; xi < g.order(); ++xi) CHECK(std::abs(tc[xi] - n * tf[xi] * th[xi]) < 1e-10);
  }

  TEST_CASE("A = {0,4} in Z/8") {
    const auto g = GroupSpec::cyclic(8);
    const GroupSet a(g, {0, 4});
    const auto t = transform(a);
    for (Index xi = 0; xi < 8; ++xi) {
      const double expected = xi % 2 == 0 ? 0.25 : 0.0;
      CHECK(t.magnitude(xi) == doctest::Approx(expected).epsilon(1e-14));
    }
    CHECK(fourth_moment(t) == doctest::Approx(1.0 / 64));
    const auto e = additive_energy(a);
    CHECK(e.combinatorial == 8);
    CHECK(e.spectral == doctest::Approx(8.0));
    CHECK(e.identity_residual < 1e-12);
    CHECK(e.doubling == Rational(1));
  }

  TEST_CASE("energy identity and bounds against brute force") {
    std::mt19937_64 rng(19);
    for (const char* lit : {"13", "16", "2,2,2,2", "3,6", "5,5"}) {
      const auto g = GroupSpec::parse(lit);
      for (int trial = 0; trial < 20; ++trial) {
        const auto a = random_set(g, rng, 0.35);
        const auto e = additive_energy(a);
        CHECK(e.combinatorial == energy_oracle(a));
        CHECK(e.identity_residual <= 1e-8);
        CHECK(e.lower_ok);
        CHECK(e.upper_ok);
        const auto s = static_cast<std::int64_t>(a.size());
        CHECK(e.upper_bound == s * s * s);
        CHECK(e.lower_bound == Rational(s * s * s * s, static_cast<std::int64_t>(sumset(a, a).size())));
      }
    }
  }

  TEST_CASE("the |G| sum |f^|^4 form disagrees off the trivial group") {
    const auto g = GroupSpec::cyclic(12);
    const auto e = additive_energy(GroupSet(g, {0, 1, 5}));
    CHECK_FALSE(e.printed_form_matches);
    CHECK(e.printed_form * 144 == doctest::Approx(e.spectral));
    CHECK(additive_energy(GroupSet(GroupSpec::parse("1"), {0})).printed_form_matches);
  }

  TEST_CASE("sumsets and doubling") {
    const auto g = GroupSpec::cyclic(97);
    std::vector<Index> m(24);
    for (Index i = 0; i < 24; ++i) m[i] = i;
    const GroupSet a(g, m);
    CHECK(sumset(a, a).size() == 47);
    CHECK(doubling_constant(a) == Rational(47, 24));
    CHECK(difference_set(a, a).size() == 47);
    CHECK(iterated_sumset(a, 4, 4).size() == 97);
    CHECK(iterated_sumset(a, 0, 0).members() == std::vector<Index>{0});
    CHECK_THROWS(iterated_sumset(a, -1, 0));
    CHECK_THROWS(doubling_constant(GroupSet(g, {})));
  }

  TEST_CASE("subgroups have doubling one and full energy") {
    const auto g = GroupSpec::parse("2,2,2");
    const GroupSet h(g, {0, 1, 2, 3});
    CHECK(doubling_constant(h) == Rational(1));
    CHECK(combinatorial_energy(h) == 64);
  }

  TEST_CASE("representation counts sum to |A|^2") {
    std::mt19937_64 rng(23);
    const auto g = GroupSpec::parse("2,2,2,2,2");
    const auto a = random_set(g, rng, 0.5);
    const auto r = representation_counts(a);
    std::int64_t total = 0;
    for (auto v : r) total += v;
    CHECK(total == static_cast<std::int64_t>(a.size() * a.size()));
  }
}
