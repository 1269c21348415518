#include "addcomb/periodicity.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>
#include <random>
#include <stdexcept>

#include "addcomb/spectrum.hpp"

namespace addcomb {

namespace {

std::uint64_t splitmix64(std::uint64_t x) {
  x += 0x9E3779B97F4A7C15ULL;
  x = (x ^ (x >> 30)) * 0xBF58476D1CE4E5B9ULL;
  x = (x ^ (x >> 27)) * 0x94D049BB133111EBULL;
  return x ^ (x >> 31);
}

std::uint64_t attempt_seed(std::uint64_t seed, int attempt) {
  return splitmix64(seed ^ splitmix64(static_cast<std::uint64_t>(attempt) + 1));
}

// Unbiased draw from [0, n) by rejection, independent of the standard library's distributions.
std::uint64_t uniform_below(std::mt19937_64& gen, std::uint64_t n) {
  const std::uint64_t limit = std::numeric_limits<std::uint64_t>::max() - std::numeric_limits<std::uint64_t>::max() % n;
  std::uint64_t v;
  do {
    v = gen();
  } while (v >= limit);
  return v % n;
}

std::vector<Complex> root_table(const GroupSpec& g) {
  const auto e = g.exponent();
  std::vector<Complex> roots(static_cast<std::size_t>(e));
  for (std::int64_t k = 0; k < e; ++k) {
    roots[k] = std::polar(1.0, 2.0 * std::numbers::pi * static_cast<double>(k) / static_cast<double>(e));
  }
  return roots;
}

// b(xi) = mean over the packet of e(-<xi, x>), for every xi.
std::vector<Complex> packet_means(const GroupSpec& g, std::span<const Element> members) {
  const auto roots = root_table(g);
  const auto e = g.exponent();
  std::vector<Complex> b(g.order(), Complex{});
  if (members.empty()) return b;
  for (DualElement xi = 0; xi < g.order(); ++xi) {
    Complex s{};
    for (Element x : members) s += roots[(e - g.pairing(xi, x)) % e];
    b[xi] = s / static_cast<double>(members.size());
  }
  return b;
}

std::vector<double> shifted(const GroupSpec& g, const std::vector<double>& f, Element x) {
  std::vector<double> out(f.size());
  for (Index y = 0; y < f.size(); ++y) out[y] = f[g.sub(y, x)];
  return out;
}

// floor keeps pure rounding noise from reading as a relative gap when both sides vanish.
double relative_gap(double a, double b, double floor = 1e-300) {
  const double scale = std::max({std::abs(a), std::abs(b), floor});
  return std::abs(a - b) / scale;
}

}  // namespace

std::vector<double> autocorrelation(const GroupSet& a) {
  const auto& g = a.group();
  std::vector<double> out(g.order(), 0.0);
  const double n = static_cast<double>(g.order());
  const auto& m = a.members();
  if (m.size() * m.size() <= 64 * g.order()) {
    for (Index x : m) {
      for (Index y : m) out[g.sub(x, y)] += 1.0;
    }
  } else {
    const auto t = transform(a);
    FourierTable sq{g, std::vector<Complex>(g.order())};
    for (DualElement xi = 0; xi < g.order(); ++xi) sq.coeffs[xi] = std::norm(t.coeffs[xi]) * n;
    const auto back = idft(sq);
    for (Index x = 0; x < g.order(); ++x) out[x] = std::round(back.values[x].real());
  }
  for (auto& v : out) v /= n;
  return out;
}

BalancedAutocorrelation balanced_autocorrelation(const GroupSet& a) {
  if (a.empty()) throw std::invalid_argument("balanced_autocorrelation: empty set");
  const auto& g = a.group();
  BalancedAutocorrelation h;
  h.group = g;
  h.alpha = to_double(a.density());
  const auto gv = autocorrelation(a);
  h.values.resize(g.order());
  for (Index x = 0; x < g.order(); ++x) h.values[x] = gv[x] / h.alpha - h.alpha;
  double sum = 0;
  for (double v : h.values) sum += v;
  h.mean = sum / static_cast<double>(g.order());

  const auto t = transform(a);
  FourierTable th{g, std::vector<Complex>(g.order())};
  for (DualElement xi = 0; xi < g.order(); ++xi) th.coeffs[xi] = std::norm(t.coeffs[xi]) / h.alpha;
  th.coeffs[0] -= h.alpha;
  const auto back = idft(th);
  for (Index x = 0; x < g.order(); ++x) {
    h.spectral_residual = std::max(h.spectral_residual, std::abs(back.values[x] - Complex(h.values[x], 0.0)));
  }
  return h;
}

std::size_t packet_size(std::size_t spectrum_size, double eps, double eta, double c_pkt) {
  const double s = static_cast<double>(std::max<std::size_t>(1, spectrum_size));
  const double m = std::ceil(c_pkt / (eps * eps) * std::log(2.0 * s / eta));
  return static_cast<std::size_t>(std::max(1.0, m));
}

double packet_bias(const GroupSpec& g, std::span<const DualElement> s, std::span<const Element> members) {
  if (s.empty() || members.empty()) return 0.0;
  const auto roots = root_table(g);
  double worst = 0;
  for (DualElement xi : s) {
    Complex sum{};
    for (Element x : members) sum += roots[g.pairing(xi, x)];
    worst = std::max(worst, std::abs(sum) / static_cast<double>(members.size()));
  }
  return worst;
}

Packet sample_packet(const GroupSpec& g, std::span<const DualElement> s, double eps, double eta, std::uint64_t seed,
                     double c_pkt, int retries) {
  if (!(eps > 0.0)) throw std::invalid_argument("sample_packet: eps must be positive");
  if (!(eta > 0.0 && eta < 1.0)) throw std::invalid_argument("sample_packet: eta must lie in (0,1)");
  if (retries < 1) throw std::invalid_argument("sample_packet: at least one attempt is required");
  for (DualElement xi : s) {
    if (xi == 0) throw std::invalid_argument("sample_packet: the trivial character has bias 1 and is excluded");
    if (xi >= g.order()) throw ShapeError("sample_packet: character outside the dual");
  }
  const std::size_t m = packet_size(s.size(), eps, eta, c_pkt);
  Packet best;
  best.group = g;
  best.spectrum.assign(s.begin(), s.end());
  best.eps = eps;
  best.eta = eta;
  best.seed = seed;
  best.achieved_bias = std::numeric_limits<double>::infinity();
  for (int r = 0; r < retries; ++r) {
    const std::uint64_t as = attempt_seed(seed, r);
    std::mt19937_64 gen(as);
    std::vector<Element> members(m);
    for (auto& x : members) x = static_cast<Element>(uniform_below(gen, g.order()));
    const double bias = packet_bias(g, s, members);
    if (bias < best.achieved_bias) {
      best.members = std::move(members);
      best.achieved_bias = bias;
      best.attempt_seed = as;
    }
    best.attempts = r + 1;
    if (bias <= eps) break;
  }
  best.success = best.achieved_bias <= eps;
  return best;
}

Packet fixed_packet(const GroupSpec& g, std::vector<Element> members, std::vector<DualElement> s, double eps) {
  for (Element x : members) {
    if (x >= g.order()) throw ShapeError("fixed_packet: element outside the group");
  }
  Packet p;
  p.group = g;
  p.members = std::move(members);
  p.spectrum = std::move(s);
  p.eps = eps;
  p.eta = 0.5;
  p.attempts = 1;
  p.achieved_bias = packet_bias(g, p.spectrum, p.members);
  p.success = p.achieved_bias <= eps;
  return p;
}

PacketL2Report packet_l2_error(const GroupSet& a, const Packet& t) {
  const auto& g = a.group();
  if (!(t.group == g)) throw ShapeError("packet_l2_error: packet lives in a different group");
  if (t.members.empty()) throw std::invalid_argument("packet_l2_error: empty packet");
  PacketL2Report r;
  const auto gv = autocorrelation(a);
  std::vector<double> avg(g.order(), 0.0);
  for (Element x : t.members) {
    for (Index y = 0; y < g.order(); ++y) avg[y] += gv[g.sub(y, x)];
  }
  const double tn = static_cast<double>(t.members.size());
  for (Index y = 0; y < g.order(); ++y) {
    const double d = gv[y] - avg[y] / tn;
    r.error += d * d;
  }

  const auto tf = a.empty() ? FourierTable{g, std::vector<Complex>(g.order())} : transform(a);
  const auto b = packet_means(g, t.members);
  std::vector<char> in_s(g.order(), 0);
  for (DualElement xi : t.spectrum) in_s[xi] = 1;
  const double n = static_cast<double>(g.order());
  for (DualElement xi = 0; xi < g.order(); ++xi) {
    const double gh = std::norm(tf.coeffs[xi]);  // g^(xi) = |f^(xi)|^2
    const double gh2 = gh * gh;
    r.spectral_error += n * gh2 * std::norm(1.0 - b[xi]);
    (in_s[xi] ? r.mass_in_s : r.mass_off_s) += gh2;
  }
  for (DualElement xi : t.spectrum) r.bias = std::max(r.bias, std::abs(b[xi]));
  const double eps = t.eps;
  r.printed_bound = 2 * eps * eps * r.mass_in_s + 4 * r.mass_off_s;
  r.scaled_bound = n * r.printed_bound;
  r.sound_bound = n * ((1 + eps) * (1 + eps) * r.mass_in_s + 4 * r.mass_off_s);
  const double slack = 1e-12 * std::max(1.0, r.error);
  r.printed_holds = r.error <= r.printed_bound + slack;
  r.scaled_holds = r.error <= r.scaled_bound + slack;
  r.sound_holds = r.error <= r.sound_bound + slack;
  return r;
}

GoodShiftsReport good_shifts(const GroupSet& a, const Packet& t) {
  const auto& g = a.group();
  const auto l2 = packet_l2_error(a, t);
  const auto gv = autocorrelation(a);
  GoodShiftsReport r;
  r.error = l2.error;
  r.shift_errors.reserve(t.members.size());
  for (Element x : t.members) {
    const auto s = shifted(g, gv, x);
    double d = 0;
    for (Index y = 0; y < g.order(); ++y) d += (gv[y] - s[y]) * (gv[y] - s[y]);
    r.shift_errors.push_back(d);
    r.mean_shift_error += d;
  }
  r.mean_shift_error /= static_cast<double>(t.members.size());

  // mean d - E = |G| sum |g^|^2 (1 - |b|^2); the two sides agree only when every b has modulus one on supp g^.
  const auto tf = a.empty() ? FourierTable{g, std::vector<Complex>(g.order())} : transform(a);
  const auto b = packet_means(g, t.members);
  double gap = 0;
  for (DualElement xi = 0; xi < g.order(); ++xi) {
    const double gh = std::norm(tf.coeffs[xi]);
    gap += static_cast<double>(g.order()) * gh * gh * (1.0 - std::norm(b[xi]));
  }
  double norm_g = 0;
  for (double v : gv) norm_g += v * v;
  const double floor = std::max(1e-300, kZeroShiftScale * norm_g);
  r.printed_identity_residual = relative_gap(r.mean_shift_error, r.error, floor);
  r.corrected_identity_residual = relative_gap(r.mean_shift_error, r.error + gap, floor);
  if (r.corrected_identity_residual > kIdentityTolerance) {
    throw std::logic_error("good_shifts: averaged shift identity failed with residual " +
                           std::to_string(r.corrected_identity_residual));
  }
  r.printed_identity_holds = r.printed_identity_residual <= kIdentityTolerance;
  const double tol = 1e-12 * std::max(1.0, r.mean_shift_error);
  for (std::size_t i = 0; i < r.shift_errors.size(); ++i) {
    if (r.shift_errors[i] <= 2 * r.error + tol) r.good.push_back(i);
    if (r.shift_errors[i] <= 2 * r.mean_shift_error + tol) r.good_markov.push_back(i);
  }
  r.contract_holds = 2 * r.good.size() >= t.members.size();
  r.markov_holds = 2 * r.good_markov.size() >= t.members.size();
  return r;
}

double packet_in_difference_fraction(const GroupSet& a, const Packet& t) {
  if (t.members.empty()) return 0.0;
  const auto diff = difference_set(a, a).mask();
  std::size_t inside = 0;
  for (Element x : t.members) inside += diff[x] ? 1 : 0;
  return static_cast<double>(inside) / static_cast<double>(t.members.size());
}

double character_distance(const GroupSpec& g, DualElement xi, Element x) {
  const std::int64_t e = g.exponent();
  const std::int64_t k = g.pairing(xi, x);
  const std::int64_t m = std::min(k, e - k);
  return 2.0 * std::sin(std::numbers::pi * static_cast<double>(m) / static_cast<double>(e));
}

namespace {

constexpr double kRadiusSlack = 1e-12;

}  // namespace

BohrProfile::BohrProfile(const GroupSpec& g, std::span<const DualElement> gamma)
    : radii_(g.order(), 0.0), rank_(gamma.size()) {
  for (DualElement xi : gamma) {
    if (xi >= g.order()) throw ShapeError("BohrProfile: frequency outside the dual");
  }
  for (Element x = 0; x < g.order(); ++x) {
    for (DualElement xi : gamma) radii_[x] = std::max(radii_[x], character_distance(g, xi, x));
  }
  sorted_ = radii_;
  std::sort(sorted_.begin(), sorted_.end());
}

std::size_t BohrProfile::count(double rho) const {
  return static_cast<std::size_t>(std::upper_bound(sorted_.begin(), sorted_.end(), rho + kRadiusSlack) -
                                  sorted_.begin());
}

double BohrProfile::regularity_constant(double rho, double c) const {
  const double d = static_cast<double>(std::max<std::size_t>(1, rank_));
  const double tmax = c / d;
  const double base = static_cast<double>(count(rho));
  auto eval = [&](double theta) {
    const double ratio = static_cast<double>(count((1 + theta) * rho)) / base;
    return std::abs(ratio - 1.0) / (d * std::abs(theta));
  };
  double worst = std::max(eval(tmax), eval(-tmax));
  // The size is a step function of the radius; the supremum is attained next to a jump.
  double previous = -1;
  for (double r : sorted_) {
    if (r == previous) continue;
    previous = r;
    if (r > rho + kRadiusSlack) {
      const double theta = (r - kRadiusSlack) / rho - 1.0;
      if (theta > 0 && theta <= tmax) worst = std::max(worst, eval(theta));
    } else {
      const double t0 = 1.0 - (r - kRadiusSlack) / rho;
      const double t = std::max(t0 * (1 + 1e-9), 0.0) + 1e-15;
      if (t <= tmax) worst = std::max(worst, eval(-t));
    }
  }
  return worst;
}

BohrSet bohr_set(const GroupSpec& g, std::span<const DualElement> gamma, double rho) {
  if (!(rho >= 0.0)) throw std::invalid_argument("bohr_set: radius must be non-negative");
  BohrSet b;
  b.group = g;
  b.frequencies.assign(gamma.begin(), gamma.end());
  b.rho = rho;
  b.rank = gamma.size();
  const BohrProfile profile(g, gamma);
  std::vector<Index> members;
  for (Element x = 0; x < g.order(); ++x) {
    if (profile.radii()[x] <= rho + kRadiusSlack) members.push_back(x);
  }
  b.elements = GroupSet(g, std::move(members));
  if (!b.elements.contains(0)) throw std::logic_error("bohr_set: 0 missing");
  for (Index x : b.elements.members()) {
    if (!b.elements.contains(g.neg(x))) throw std::logic_error("bohr_set: not symmetric");
  }
  return b;
}

RegularityReport regularize(const BohrProfile& profile, double rho, double c, int grid) {
  if (!(rho > 0.0)) throw std::invalid_argument("regularize: radius must be positive");
  if (grid < 2) throw std::invalid_argument("regularize: grid needs at least two points");
  RegularityReport r;
  r.rho = rho;
  r.grid = grid;
  r.rank = profile.rank();
  r.constant = std::numeric_limits<double>::infinity();
  for (int i = 0; i < grid; ++i) {
    const double rp = rho * std::exp2(-static_cast<double>(i) / (grid - 1));
    const double k = profile.regularity_constant(rp, c);
    if (k < r.constant) {
      r.constant = k;
      r.rho_prime = rp;
    }
  }
  r.regular = r.constant <= kRegularityThreshold;
  return r;
}

RegularityReport regularize(const GroupSpec& g, std::span<const DualElement> gamma, double rho, double c, int grid) {
  return regularize(BohrProfile(g, gamma), rho, c, grid);
}

PolyBogReport polybog_search(const GroupSet& a, const LedgerConfig& cfg) {
  if (a.empty()) throw std::invalid_argument("polybog_search: empty set");
  const auto& g = a.group();
  if (!g.is_cyclic()) throw std::invalid_argument("polybog_search: requires a cyclic group");
  PolyBogReport r;
  r.four_a_minus_four_a = iterated_sumset(a, 4, 4);
  r.k = doubling_constant(a);
  const double kd = to_double(r.k);
  r.tau = std::pow(kd, -cfg.c0);
  const auto t = transform(a);
  const auto spec = large_spectrum(t, to_double(a.density()), r.tau);
  r.gamma = extract_maximal_dissociated(g, spec);
  const BohrProfile profile(g, r.gamma);

  // B(Gamma, rho) lies in 4A - 4A iff rho is below the least radius of an element outside it.
  const auto inside = r.four_a_minus_four_a.mask();
  double bad = std::numeric_limits<double>::infinity();
  for (Element x = 0; x < g.order(); ++x) {
    if (!inside[x]) bad = std::min(bad, profile.radii()[x]);
  }
  constexpr int kMaxSteps = 240;
  std::optional<double> found;
  for (int k = 0; k <= kMaxSteps; ++k) {
    const double rho = 2.0 * std::exp2(-k / 4.0);
    r.grid_steps = k + 1;
    if (rho + kRadiusSlack < bad) {
      found = rho;
      break;
    }
  }
  if (found) {
    r.containment_rho = *found;
    r.regularity = regularize(profile, *found, cfg.regularity_c, cfg.rho_grid);
    r.rho_prime = r.regularity->rho_prime;
  }
  r.bohr = bohr_set(g, r.gamma, r.rho_prime);
  if (r.regularity) {
    r.bohr.regular = r.regularity->regular;
    r.bohr.regularity_constant = r.regularity->constant;
  }
  r.trivial_bohr = r.bohr.elements.size() == 1;
  r.rank_ok = static_cast<double>(r.gamma.size()) <= std::pow(kd, cfg.C) + 1e-12;
  r.radius_ok = found && r.rho_prime >= std::pow(kd, -cfg.C) - 1e-15;
  return r;
}

}  // namespace addcomb
