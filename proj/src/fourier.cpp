#include "addcomb/fourier.hpp"

#include <cmath>
#include <memory>
#include <numbers>
#include <stdexcept>
#include <unordered_map>

namespace addcomb {

DensityFunction DensityFunction::indicator(const GroupSet& a) {
  DensityFunction f = zero(a.group());
  for (Index x : a.members()) f.values[x] = 1.0;
  return f;
}

DensityFunction DensityFunction::zero(const GroupSpec& g) { return {g, std::vector<Complex>(g.order(), 0.0)}; }

namespace {

std::size_t smallest_prime_factor(std::size_t n) {
  for (std::size_t p = 2; p * p <= n; ++p) {
    if (n % p == 0) return p;
  }
  return n;
}

struct Plan {
  std::size_t n = 1;
  std::vector<Complex> roots;  // exp(-2 pi i j / n)
};

const Plan& plan_for(std::size_t n) {
  thread_local std::unordered_map<std::size_t, std::unique_ptr<Plan>> cache;
  auto& slot = cache[n];
  if (!slot) {
    slot = std::make_unique<Plan>();
    slot->n = n;
    slot->roots.resize(n);
    for (std::size_t j = 0; j < n; ++j) {
      slot->roots[j] = std::polar(1.0, -2.0 * std::numbers::pi * static_cast<double>(j) / static_cast<double>(n));
    }
  }
  return *slot;
}

// Decimation in time, smallest prime radix first. out[k] = sum_j in[j*stride] w^(jk).
void fft_rec(const Complex* in, std::size_t stride, Complex* out, std::size_t n, const Plan& plan,
             std::size_t root_step, std::vector<Complex>& scratch, std::vector<Complex>& twiddled) {
  if (n == 1) {
    out[0] = in[0];
    return;
  }
  const auto& w = plan.roots;
  const std::size_t r = smallest_prime_factor(n);
  const std::size_t m = n / r;
  if (m == 1) {
    for (std::size_t k = 0; k < n; ++k) {
      Complex acc = 0.0;
      for (std::size_t j = 0; j < n; ++j) acc += in[j * stride] * w[((j * k) % n) * root_step];
      out[k] = acc;
    }
    return;
  }
  for (std::size_t q = 0; q < r; ++q) {
    fft_rec(in + q * stride, stride * r, out + q * m, m, plan, root_step * r, scratch, twiddled);
  }
  Complex* tmp = scratch.data();
  twiddled.resize(std::max(twiddled.size(), r));
  for (std::size_t k = 0; k < m; ++k) {
    for (std::size_t q = 0; q < r; ++q) twiddled[q] = out[q * m + k] * w[q * k * root_step];
    if (r == 2) {
      tmp[k] = twiddled[0] + twiddled[1];
      tmp[k + m] = twiddled[0] - twiddled[1];
      continue;
    }
    for (std::size_t s = 0; s < r; ++s) {
      Complex acc = 0.0;
      for (std::size_t q = 0; q < r; ++q) acc += twiddled[q] * w[((q * s) % r) * m * root_step];
      tmp[k + m * s] = acc;
    }
  }
  std::copy(tmp, tmp + n, out);
}

// Unnormalised forward transform along every axis, in place.
void forward_axes(const GroupSpec& g, std::vector<Complex>& data) {
  const auto& f = g.factors();
  std::size_t stride = 1;
  std::vector<Complex> line_in, line_out, scratch, twiddled;
  for (std::size_t axis = f.size(); axis-- > 0;) {
    const auto n = static_cast<std::size_t>(f[axis]);
    const Plan& plan = plan_for(n);
    line_in.resize(n);
    line_out.resize(n);
    scratch.resize(n);
    const std::size_t block = n * stride;
    for (std::size_t outer = 0; outer < data.size(); outer += block) {
      for (std::size_t inner = 0; inner < stride; ++inner) {
        const std::size_t base = outer + inner;
        for (std::size_t j = 0; j < n; ++j) line_in[j] = data[base + j * stride];
        fft_rec(line_in.data(), 1, line_out.data(), n, plan, 1, scratch, twiddled);
        for (std::size_t j = 0; j < n; ++j) data[base + j * stride] = line_out[j];
      }
    }
    stride *= n;
  }
}

void check_same_group(const GroupSpec& a, const GroupSpec& b, const char* what) {
  if (!(a == b)) throw ShapeError(std::string(what) + ": operands live in different groups");
}

std::vector<Complex> negative_roots(std::int64_t e) {
  std::vector<Complex> r(static_cast<std::size_t>(e));
  for (std::int64_t p = 0; p < e; ++p) {
    r[static_cast<std::size_t>(p)] =
        std::polar(1.0, -2.0 * std::numbers::pi * static_cast<double>(p) / static_cast<double>(e));
  }
  return r;
}

bool elementary_two_group(const GroupSpec& g) {
  for (auto n : g.factors()) {
    if (n != 2) return false;
  }
  return true;
}

template <typename Visit>
void for_each_pair_sum(const GroupSet& a, const GroupSet& b, Visit visit) {
  const auto& g = a.group();
  if (g.rank() == 1) {
    const Index n = g.order();
    for (Index x : a.members()) {
      for (Index y : b.members()) {
        const Index s = x + y;
        visit(s >= n ? s - n : s);
      }
    }
  } else if (elementary_two_group(g)) {
    for (Index x : a.members()) {
      for (Index y : b.members()) visit(x ^ y);
    }
  } else {
    const std::size_t r = g.rank();
    std::vector<std::uint32_t> factors(g.factors().begin(), g.factors().end());
    auto digits_of = [&](const GroupSet& s) {
      std::vector<std::uint32_t> d;
      d.reserve(s.size() * r);
      for (Index x : s.members()) {
        for (auto c : g.decode(x)) d.push_back(static_cast<std::uint32_t>(c));
      }
      return d;
    };
    const auto da = digits_of(a);
    const auto db = digits_of(b);
    std::vector<Index> strides(r);
    Index stride = 1;
    for (std::size_t i = r; i-- > 0;) {
      strides[i] = stride;
      stride *= static_cast<Index>(factors[i]);
    }
    for (std::size_t i = 0; i < a.size(); ++i) {
      const auto* x = &da[i * r];
      for (std::size_t j = 0; j < b.size(); ++j) {
        const auto* y = &db[j * r];
        Index out = 0;
        for (std::size_t k = 0; k < r; ++k) {
          auto c = x[k] + y[k];
          if (c >= factors[k]) c -= factors[k];
          out += c * strides[k];
        }
        visit(out);
      }
    }
  }
}

GroupSet negate(const GroupSet& a) {
  std::vector<Index> out;
  out.reserve(a.size());
  for (Index x : a.members()) out.push_back(a.group().neg(x));
  return GroupSet(a.group(), std::move(out));
}

}  // namespace

FourierTable dft(const DensityFunction& f) {
  if (f.values.size() != f.group.order()) throw ShapeError("dft: function length does not match the group");
  FourierTable t{f.group, f.values};
  forward_axes(f.group, t.coeffs);
  const double scale = 1.0 / static_cast<double>(f.group.order());
  for (auto& c : t.coeffs) c *= scale;
  return t;
}

FourierTable dft_direct(const DensityFunction& f) {
  const auto& g = f.group;
  if (f.values.size() != g.order()) throw ShapeError("dft_direct: function length does not match the group");
  const auto roots = negative_roots(g.exponent());
  FourierTable t{g, std::vector<Complex>(g.order(), 0.0)};
  const double scale = 1.0 / static_cast<double>(g.order());
  for (DualElement xi = 0; xi < g.order(); ++xi) {
    Complex acc = 0.0;
    for (Element x = 0; x < g.order(); ++x) acc += f.values[x] * roots[static_cast<std::size_t>(g.pairing(xi, x))];
    t.coeffs[xi] = acc * scale;
  }
  return t;
}

DensityFunction idft(const FourierTable& t) {
  DensityFunction f{t.group, t.coeffs};
  for (auto& v : f.values) v = std::conj(v);
  forward_axes(t.group, f.values);
  for (auto& v : f.values) v = std::conj(v);
  return f;
}

FourierTable transform(const GroupSet& a) { return dft(DensityFunction::indicator(a)); }

DensityFunction convolve(const DensityFunction& f, const DensityFunction& g) {
  check_same_group(f.group, g.group, "convolve");
  auto tf = dft(f);
  const auto tg = dft(g);
  const double n = static_cast<double>(f.group.order());
  for (std::size_t i = 0; i < tf.coeffs.size(); ++i) tf.coeffs[i] *= n * tg.coeffs[i];
  return idft(tf);
}

DensityFunction convolve_direct(const DensityFunction& f, const DensityFunction& g) {
  check_same_group(f.group, g.group, "convolve_direct");
  const auto& grp = f.group;
  DensityFunction out = DensityFunction::zero(grp);
  for (Element y = 0; y < grp.order(); ++y) {
    if (f.values[y] == 0.0) continue;
    for (Element z = 0; z < grp.order(); ++z) out.values[grp.add(y, z)] += f.values[y] * g.values[z];
  }
  return out;
}

double parseval_audit(const DensityFunction& f, const FourierTable& t) {
  double lhs = 0, rhs = 0;
  for (const auto& v : f.values) lhs += std::norm(v);
  for (const auto& c : t.coeffs) rhs += std::norm(c);
  rhs *= static_cast<double>(f.group.order());
  return std::abs(lhs - rhs) / std::max(1.0, lhs);
}

double parseval_audit(const DensityFunction& f) { return parseval_audit(f, dft(f)); }

double fourth_moment(const FourierTable& t) {
  double s = 0;
  for (const auto& c : t.coeffs) {
    const double m2 = std::norm(c);
    s += m2 * m2;
  }
  return s;
}

std::vector<std::int64_t> representation_counts(const GroupSet& a) {
  std::vector<std::int64_t> r(a.group().order(), 0);
  for_each_pair_sum(a, a, [&r](Index s) { ++r[s]; });
  return r;
}

std::int64_t combinatorial_energy(const GroupSet& a) {
  std::int64_t e = 0;
  for (auto v : representation_counts(a)) e += v * v;
  return e;
}

GroupSet sumset(const GroupSet& a, const GroupSet& b) {
  check_same_group(a.group(), b.group(), "sumset");
  std::vector<char> hit(a.group().order(), 0);
  for_each_pair_sum(a, b, [&hit](Index s) { hit[s] = 1; });
  std::vector<Index> out;
  for (Index x = 0; x < hit.size(); ++x) {
    if (hit[x]) out.push_back(x);
  }
  return GroupSet(a.group(), std::move(out));
}

GroupSet difference_set(const GroupSet& a, const GroupSet& b) { return sumset(a, negate(b)); }

GroupSet iterated_sumset(const GroupSet& a, int k, int l) {
  if (k < 0 || l < 0) throw std::invalid_argument("iterated_sumset: negative multiplicity");
  GroupSet cur(a.group(), {0});
  if (a.empty() && k + l > 0) return GroupSet(a.group(), {});
  for (int i = 0; i < k; ++i) cur = sumset(cur, a);
  const GroupSet neg = negate(a);
  for (int i = 0; i < l; ++i) cur = sumset(cur, neg);
  return cur;
}

Rational doubling_constant(const GroupSet& a) {
  if (a.empty()) throw std::invalid_argument("doubling_constant: empty set");
  return Rational(static_cast<std::int64_t>(sumset(a, a).size()), static_cast<std::int64_t>(a.size()));
}

EnergyReport additive_energy(const GroupSet& a, const FourierTable& t) {
  if (a.empty()) throw std::invalid_argument("additive_energy: empty set");
  EnergyReport r;
  const auto counts = representation_counts(a);
  std::int64_t support = 0;
  for (auto v : counts) {
    r.combinatorial += v * v;
    if (v) ++support;
  }
  const auto n = static_cast<double>(a.group().order());
  const double m4 = fourth_moment(t);
  r.spectral = n * n * n * m4;
  r.printed_form = n * m4;
  const auto size = static_cast<std::int64_t>(a.size());
  r.doubling = Rational(support, size);
  r.lower_bound = Rational(size * size * size * size, support);
  r.upper_bound = size * size * size;
  const auto e = static_cast<double>(r.combinatorial);
  r.identity_residual = std::abs(e - r.spectral) / e;
  r.lower_ok = Rational(r.combinatorial) >= r.lower_bound;
  r.upper_ok = r.combinatorial <= r.upper_bound;
  r.printed_form_matches = std::abs(e - r.printed_form) <= 1e-6 * e;
  return r;
}

EnergyReport additive_energy(const GroupSet& a) { return additive_energy(a, transform(a)); }

}  // namespace addcomb
