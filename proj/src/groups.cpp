#include "addcomb/groups.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <numbers>
#include <numeric>
#include <sstream>

namespace addcomb {

std::string to_string(const Rational& r) {
  return std::to_string(r.numerator()) + "/" + std::to_string(r.denominator());
}

Rational parse_rational(std::string_view text) {
  auto parse_int = [](std::string_view s) {
    std::int64_t v = 0;
    auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
    if (ec != std::errc{} || ptr != s.data() + s.size()) {
      throw std::invalid_argument("malformed rational: " + std::string(s));
    }
    return v;
  };
  const auto slash = text.find('/');
  if (slash == std::string_view::npos) return Rational(parse_int(text));
  const auto den = parse_int(text.substr(slash + 1));
  if (den == 0) throw std::invalid_argument("rational with zero denominator");
  return Rational(parse_int(text.substr(0, slash)), den);
}

namespace {

std::int64_t mod(std::int64_t a, std::int64_t n) {
  const std::int64_t r = a % n;
  return r < 0 ? r + n : r;
}

// Closure of gens under addition; returns a membership bitmap and the sorted elements.
std::vector<Index> closure(const GroupSpec& g, std::span<const Index> gens) {
  std::vector<char> seen(g.order(), 0);
  std::vector<Index> elems{0};
  seen[0] = 1;
  for (std::size_t head = 0; head < elems.size(); ++head) {
    const Index x = elems[head];
    for (Index s : gens) {
      const Index y = g.add(x, s);
      if (!seen[y]) {
        seen[y] = 1;
        elems.push_back(y);
      }
    }
  }
  std::sort(elems.begin(), elems.end());
  return elems;
}

void check_members(const GroupSpec& g, std::span<const Index> xs, const char* what) {
  for (Index x : xs) {
    if (x >= g.order()) {
      throw ShapeError(std::string(what) + ": element " + std::to_string(x) + " outside group of order " +
                       std::to_string(g.order()));
    }
  }
}

bool sorted_contains(const std::vector<Index>& v, Index x) { return std::binary_search(v.begin(), v.end(), x); }

}  // namespace

GroupSpec::GroupSpec(std::vector<std::int64_t> factors) : factors_(std::move(factors)) {
  strides_.assign(factors_.size(), 1);
  order_ = 1;
  exponent_ = 1;
  for (std::size_t i = factors_.size(); i-- > 0;) {
    if (factors_[i] < 2) throw ShapeError("cyclic factors must be >= 2");
    strides_[i] = static_cast<std::int64_t>(order_);
    order_ *= static_cast<std::size_t>(factors_[i]);
    if (order_ > (std::size_t{1} << 40)) throw ShapeError("group order too large");
    exponent_ = std::lcm(exponent_, factors_[i]);
  }
  pairing_weights_.resize(factors_.size());
  for (std::size_t i = 0; i < factors_.size(); ++i) pairing_weights_[i] = exponent_ / factors_[i];
}

GroupSpec GroupSpec::parse(std::string_view literal) {
  std::vector<std::int64_t> factors;
  std::size_t pos = 0;
  while (pos <= literal.size()) {
    auto end = literal.find(',', pos);
    if (end == std::string_view::npos) end = literal.size();
    auto tok = literal.substr(pos, end - pos);
    while (!tok.empty() && tok.front() == ' ') tok.remove_prefix(1);
    while (!tok.empty() && tok.back() == ' ') tok.remove_suffix(1);
    std::int64_t v = 0;
    auto [ptr, ec] = std::from_chars(tok.data(), tok.data() + tok.size(), v);
    if (tok.empty() || ec != std::errc{} || ptr != tok.data() + tok.size()) {
      throw ShapeError("malformed group literal: '" + std::string(literal) + "'");
    }
    factors.push_back(v);
    pos = end + 1;
  }
  if (factors.size() == 1 && factors[0] == 1) return GroupSpec{};
  return GroupSpec(std::move(factors));
}

void GroupSpec::check_index(Index x) const {
  if (x >= order_) throw ShapeError("index " + std::to_string(x) + " outside group of order " + std::to_string(order_));
}

Index GroupSpec::encode(std::span<const std::int64_t> coords) const {
  if (coords.size() != factors_.size()) throw ShapeError("coordinate count does not match group rank");
  Index x = 0;
  for (std::size_t i = 0; i < coords.size(); ++i) {
    if (coords[i] < 0 || coords[i] >= factors_[i]) throw ShapeError("coordinate out of range");
    x += static_cast<Index>(coords[i] * strides_[i]);
  }
  return x;
}

std::vector<std::int64_t> GroupSpec::decode(Index x) const {
  check_index(x);
  std::vector<std::int64_t> c(factors_.size());
  for (std::size_t i = 0; i < factors_.size(); ++i) {
    c[i] = (static_cast<std::int64_t>(x) / strides_[i]) % factors_[i];
  }
  return c;
}

Index GroupSpec::add(Index x, Index y) const {
  if (factors_.size() == 1) {
    const Index s = x + y;
    return s >= order_ ? s - order_ : s;
  }
  Index out = 0;
  for (std::size_t i = 0; i < factors_.size(); ++i) {
    const auto n = factors_[i];
    const auto s = strides_[i];
    auto c = (static_cast<std::int64_t>(x) / s) % n + (static_cast<std::int64_t>(y) / s) % n;
    if (c >= n) c -= n;
    out += static_cast<Index>(c * s);
  }
  return out;
}

Index GroupSpec::neg(Index x) const {
  if (factors_.size() == 1) return x == 0 ? 0 : order_ - x;
  Index out = 0;
  for (std::size_t i = 0; i < factors_.size(); ++i) {
    const auto n = factors_[i];
    const auto s = strides_[i];
    const auto c = (static_cast<std::int64_t>(x) / s) % n;
    out += static_cast<Index>((c == 0 ? 0 : n - c) * s);
  }
  return out;
}

Index GroupSpec::sub(Index x, Index y) const { return add(x, neg(y)); }

Index GroupSpec::scale(Index x, std::int64_t k) const {
  Index out = 0;
  for (std::size_t i = 0; i < factors_.size(); ++i) {
    const auto n = factors_[i];
    const auto s = strides_[i];
    const auto c = (static_cast<std::int64_t>(x) / s) % n;
    out += static_cast<Index>(mod(static_cast<std::int64_t>((static_cast<__int128>(c) * k) % n), n) * s);
  }
  return out;
}

std::int64_t GroupSpec::pairing(DualElement xi, Element x) const {
  if (factors_.size() == 1) {
    return static_cast<std::int64_t>((static_cast<unsigned __int128>(xi) * x) % order_);
  }
  std::int64_t acc = 0;
  for (std::size_t i = 0; i < factors_.size(); ++i) {
    const auto n = factors_[i];
    const auto s = strides_[i];
    const auto a = (static_cast<std::int64_t>(xi) / s) % n;
    const auto b = (static_cast<std::int64_t>(x) / s) % n;
    acc = (acc + ((a * b) % n) * pairing_weights_[i]) % exponent_;
  }
  return acc;
}

std::complex<double> GroupSpec::character(DualElement xi, Element x) const {
  const double t = static_cast<double>(pairing(xi, x)) / static_cast<double>(exponent_);
  return std::polar(1.0, 2.0 * std::numbers::pi * t);
}

std::string GroupSpec::to_string() const {
  if (factors_.empty()) return "1";
  std::ostringstream os;
  for (std::size_t i = 0; i < factors_.size(); ++i) os << (i ? "," : "") << factors_[i];
  return os.str();
}

GroupSet::GroupSet(GroupSpec group, std::vector<Index> members) : group_(std::move(group)), members_(std::move(members)) {
  check_members(group_, members_, "GroupSet");
  std::sort(members_.begin(), members_.end());
  members_.erase(std::unique(members_.begin(), members_.end()), members_.end());
}

bool GroupSet::contains(Index x) const { return sorted_contains(members_, x); }

Rational GroupSet::density() const {
  return Rational(static_cast<std::int64_t>(members_.size()), static_cast<std::int64_t>(group_.order()));
}

std::vector<char> GroupSet::mask() const {
  std::vector<char> m(group_.order(), 0);
  for (Index x : members_) m[x] = 1;
  return m;
}

bool Subgroup::contains(Element x) const { return sorted_contains(elements, x); }
bool DualSubgroup::contains(DualElement xi) const { return sorted_contains(elements, xi); }

Subgroup enumerate_subgroup(const GroupSpec& g, std::span<const Element> gens) {
  if (gens.empty()) throw std::invalid_argument("enumerate_subgroup: generator list is empty");
  check_members(g, gens, "enumerate_subgroup");
  Subgroup h;
  h.parent = g;
  h.generators.assign(gens.begin(), gens.end());
  h.elements = closure(g, gens);
  h.index = g.order() / h.elements.size();
  return h;
}

DualSubgroup enumerate_dual_subgroup(const GroupSpec& g, std::span<const DualElement> gens) {
  check_members(g, gens, "enumerate_dual_subgroup");
  DualSubgroup v;
  v.parent = g;
  v.generators.assign(gens.begin(), gens.end());
  v.elements = closure(g, gens);
  v.index = g.order() / v.elements.size();
  return v;
}

std::vector<Index> minimal_generators(const GroupSpec& g, std::span<const Index> elements) {
  std::vector<Index> gens;
  std::vector<Index> current{0};
  for (Index x : elements) {
    if (sorted_contains(current, x)) continue;
    gens.push_back(x);
    current = closure(g, gens);
  }
  return gens;
}

Subgroup annihilator(const DualSubgroup& v) {
  const auto& g = v.parent;
  const std::vector<Index> gens =
      v.generators.empty() ? minimal_generators(g, v.elements) : std::vector<Index>(v.generators);
  Subgroup h;
  h.parent = g;
  for (Index x = 0; x < g.order(); ++x) {
    bool ok = true;
    for (Index xi : gens) {
      if (g.pairing(xi, x) != 0) {
        ok = false;
        break;
      }
    }
    if (ok) h.elements.push_back(x);
  }
  h.generators = minimal_generators(g, h.elements);
  h.index = g.order() / h.elements.size();
  if (h.elements.size() * v.elements.size() != g.order()) {
    throw std::logic_error("annihilator: |H| * |V| != |G| (is V a subgroup?)");
  }
  return h;
}

DualSubgroup dual_annihilator(const Subgroup& h) {
  const auto& g = h.parent;
  const std::vector<Index> gens =
      h.generators.empty() ? minimal_generators(g, h.elements) : std::vector<Index>(h.generators);
  DualSubgroup v;
  v.parent = g;
  for (Index xi = 0; xi < g.order(); ++xi) {
    bool ok = true;
    for (Index x : gens) {
      if (g.pairing(xi, x) != 0) {
        ok = false;
        break;
      }
    }
    if (ok) v.elements.push_back(xi);
  }
  v.generators = minimal_generators(g, v.elements);
  v.index = g.order() / v.elements.size();
  if (h.elements.size() * v.elements.size() != g.order()) {
    throw std::logic_error("dual_annihilator: |H| * |V| != |G| (is H a subgroup?)");
  }
  return v;
}

std::vector<Subgroup> all_subgroups(const GroupSpec& g) {
  std::vector<std::vector<Index>> found;
  auto add_unique = [&found](std::vector<Index> e) {
    if (std::find(found.begin(), found.end(), e) == found.end()) {
      found.push_back(std::move(e));
      return true;
    }
    return false;
  };
  for (Index x = 0; x < g.order(); ++x) {
    const Index gen[1] = {x};
    add_unique(closure(g, gen));
  }
  // Joins of cyclic subgroups until closed.
  for (bool grew = true; grew;) {
    grew = false;
    const std::size_t n = found.size();
    for (std::size_t i = 0; i < n; ++i) {
      for (std::size_t j = i + 1; j < n; ++j) {
        auto gi = minimal_generators(g, found[i]);
        const auto gj = minimal_generators(g, found[j]);
        gi.insert(gi.end(), gj.begin(), gj.end());
        if (add_unique(closure(g, gi))) grew = true;
      }
    }
  }
  std::sort(found.begin(), found.end(), [](const auto& a, const auto& b) {
    return a.size() != b.size() ? a.size() < b.size() : a < b;
  });
  std::vector<Subgroup> out;
  out.reserve(found.size());
  for (auto& e : found) {
    Subgroup h;
    h.parent = g;
    h.generators = minimal_generators(g, e);
    h.elements = std::move(e);
    h.index = g.order() / h.elements.size();
    out.push_back(std::move(h));
  }
  return out;
}

namespace {

struct SmithResult {
  std::vector<std::int64_t> diagonal;             // one entry per column
  std::vector<std::vector<std::int64_t>> column;  // k x k column transform, entries mod exponent
};

// Smith normal form of the integer relation matrix (rows = relations, k columns),
// tracking only the unimodular column transform.
SmithResult smith_columns(std::vector<std::vector<std::int64_t>> r, std::size_t k, std::int64_t exponent) {
  std::vector<std::vector<std::int64_t>> v(k, std::vector<std::int64_t>(k, 0));
  for (std::size_t i = 0; i < k; ++i) v[i][i] = 1;
  const std::size_t rows = r.size();
  std::vector<std::int64_t> diag(k, 0);

  auto col_axpy = [&](std::size_t dst, std::size_t src, std::int64_t q) {
    for (std::size_t i = 0; i < rows; ++i) r[i][dst] -= q * r[i][src];
    for (std::size_t i = 0; i < k; ++i) v[i][dst] = mod(v[i][dst] - mod(q, exponent) * v[i][src] % exponent, exponent);
  };
  auto swap_cols = [&](std::size_t a, std::size_t b) {
    if (a == b) return;
    for (auto& row : r) std::swap(row[a], row[b]);
    for (auto& row : v) std::swap(row[a], row[b]);
  };

  for (std::size_t t = 0; t < k && t < rows; ++t) {
    for (;;) {
      std::size_t pi = rows, pj = k;
      std::int64_t best = 0;
      for (std::size_t i = t; i < rows; ++i) {
        for (std::size_t j = t; j < k; ++j) {
          const auto a = std::abs(r[i][j]);
          if (a != 0 && (best == 0 || a < best)) {
            best = a;
            pi = i;
            pj = j;
          }
        }
      }
      if (best == 0) break;
      std::swap(r[t], r[pi]);
      swap_cols(t, pj);

      bool clean = true;
      for (std::size_t i = t + 1; i < rows; ++i) {
        const auto q = r[i][t] / r[t][t];
        if (q != 0) {
          for (std::size_t j = t; j < k; ++j) r[i][j] -= q * r[t][j];
        }
        if (r[i][t] != 0) clean = false;
      }
      for (std::size_t j = t + 1; j < k; ++j) {
        const auto q = r[t][j] / r[t][t];
        if (q != 0) col_axpy(j, t, q);
        if (r[t][j] != 0) clean = false;
      }
      if (!clean) continue;

      bool divisible = true;
      for (std::size_t i = t + 1; i < rows && divisible; ++i) {
        for (std::size_t j = t + 1; j < k; ++j) {
          if (r[i][j] % r[t][t] != 0) {
            for (std::size_t c = t; c < k; ++c) r[t][c] += r[i][c];
            divisible = false;
            break;
          }
        }
      }
      if (divisible) break;
    }
    diag[t] = std::abs(r[t][t]);
  }
  return {std::move(diag), std::move(v)};
}

}  // namespace

double QuotientMap::codim() const { return std::log(static_cast<double>(image.order())); }

GroupSet QuotientMap::apply(const GroupSet& a) const {
  if (!(a.group() == parent)) throw ShapeError("QuotientMap::apply: set lives in a different group");
  std::vector<Index> out;
  out.reserve(a.size());
  for (Index x : a.members()) out.push_back(projection[x]);
  return GroupSet(image, std::move(out));
}

std::optional<DualElement> QuotientMap::descend_character(DualElement xi) const {
  const auto& f = image.factors();
  std::vector<std::int64_t> coords(f.size());
  const auto e = parent.exponent();
  for (std::size_t j = 0; j < f.size(); ++j) {
    // zeta_j / d_j = <xi, x_j> (mod 1)
    const auto num = static_cast<__int128>(parent.pairing(xi, basis_preimages[j])) * f[j];
    if (num % e != 0) return std::nullopt;
    coords[j] = static_cast<std::int64_t>((num / e) % f[j]);
  }
  const Index zeta = image.encode(coords);
  // xi must be trivial on the kernel for the descent to exist.
  for (Index h : kernel.generators) {
    if (parent.pairing(xi, h) != 0) return std::nullopt;
  }
  return zeta;
}

QuotientMap quotient(const GroupSpec& g, const Subgroup& h) {
  if (!(h.parent == g)) throw ShapeError("quotient: subgroup lives in a different group");
  const std::size_t k = g.rank();
  QuotientMap q;
  q.parent = g;
  q.kernel = h;
  if (q.kernel.generators.empty()) q.kernel.generators = minimal_generators(g, h.elements);

  std::vector<std::vector<std::int64_t>> rel;
  for (Index x : q.kernel.generators) {
    if (x != 0) rel.push_back(g.decode(x));
  }
  for (std::size_t i = 0; i < k; ++i) {
    std::vector<std::int64_t> row(k, 0);
    row[i] = g.factors()[i];
    rel.push_back(std::move(row));
  }
  const auto snf = k == 0 ? SmithResult{} : smith_columns(std::move(rel), k, g.exponent());

  std::vector<std::size_t> live;
  std::vector<std::int64_t> image_factors;
  for (std::size_t t = 0; t < k; ++t) {
    if (snf.diagonal[t] > 1) {
      live.push_back(t);
      image_factors.push_back(snf.diagonal[t]);
    }
  }
  q.image = GroupSpec(image_factors);

  q.projection.resize(g.order());
  std::vector<std::int64_t> y(live.size());
  for (Index x = 0; x < g.order(); ++x) {
    const auto c = g.decode(x);
    for (std::size_t s = 0; s < live.size(); ++s) {
      const auto t = live[s];
      const auto d = image_factors[s];
      __int128 acc = 0;
      for (std::size_t j = 0; j < k; ++j) acc += static_cast<__int128>(c[j]) * snf.column[j][t];
      y[s] = static_cast<std::int64_t>(acc % d);
    }
    q.projection[x] = q.image.encode(y);
  }

  // Cyclic-to-cyclic maps are normalised so that pi(1) = 1.
  if (g.rank() == 1 && q.image.rank() == 1) {
    const auto d = image_factors[0];
    const auto u = static_cast<std::int64_t>(q.projection[1 % g.order()]);
    std::int64_t inv = 1;
    for (std::int64_t c = 1; c < d; ++c) {
      if ((u * c) % d == 1) {
        inv = c;
        break;
      }
    }
    for (auto& p : q.projection) p = static_cast<Index>((static_cast<std::int64_t>(p) * inv) % d);
  }

  // Audit: surjective homomorphism with kernel exactly H.
  std::size_t kernel_count = 0;
  for (Index x = 0; x < g.order(); ++x) {
    if (q.projection[x] == 0) {
      ++kernel_count;
      if (!h.contains(x)) throw std::logic_error("quotient: projection kernel exceeds H");
    }
  }
  if (kernel_count != h.size() || q.image.order() * h.size() != g.order()) {
    throw std::logic_error("quotient: projection kernel or image order mismatch");
  }

  q.basis_preimages.assign(q.image.rank(), 0);
  std::vector<bool> found(q.image.rank(), false);
  std::size_t remaining = q.image.rank();
  std::vector<std::int64_t> unit(q.image.rank(), 0);
  std::vector<Index> unit_index(q.image.rank());
  for (std::size_t j = 0; j < q.image.rank(); ++j) {
    unit[j] = 1;
    unit_index[j] = q.image.encode(unit);
    unit[j] = 0;
  }
  for (Index x = 0; x < g.order() && remaining > 0; ++x) {
    for (std::size_t j = 0; j < unit_index.size(); ++j) {
      if (!found[j] && q.projection[x] == unit_index[j]) {
        q.basis_preimages[j] = x;
        found[j] = true;
        --remaining;
      }
    }
  }
  return q;
}

std::int64_t ModelingResult::map(std::int64_t a) const { return mod(a + shift, modulus); }

GroupSet ModelingResult::image(std::span<const std::int64_t> a) const {
  std::vector<Index> out;
  out.reserve(a.size());
  for (auto v : a) out.push_back(static_cast<Index>(map(v)));
  return GroupSet(GroupSpec::cyclic(modulus), std::move(out));
}

bool ModelingResult::within_budget(double exponent, std::size_t set_size) const {
  const double k = to_double(doubling_in_z);
  return static_cast<double>(modulus) <= exponent * std::pow(k, exponent) * static_cast<double>(set_size);
}

namespace {

// Bitmap of the integer sumset m*A for A already translated into [0, diam].
std::vector<char> iterated_sum(const std::vector<std::int64_t>& a, std::int64_t diam, int m) {
  std::vector<char> cur(static_cast<std::size_t>(diam) + 1, 0);
  for (auto v : a) cur[static_cast<std::size_t>(v)] = 1;
  for (int step = 1; step < m; ++step) {
    std::vector<char> next(cur.size() + static_cast<std::size_t>(diam), 0);
    for (std::size_t s = 0; s < cur.size(); ++s) {
      if (!cur[s]) continue;
      for (auto v : a) next[s + static_cast<std::size_t>(v)] = 1;
    }
    cur = std::move(next);
  }
  return cur;
}

// Distinct elements of mA - mA (as offsets from -m*diam).
std::vector<std::int64_t> difference_values(const std::vector<std::int64_t>& a, std::int64_t diam, int m) {
  const auto sum = iterated_sum(a, diam, m);
  std::vector<std::int64_t> members;
  for (std::size_t s = 0; s < sum.size(); ++s) {
    if (sum[s]) members.push_back(static_cast<std::int64_t>(s));
  }
  const auto span = static_cast<std::int64_t>(sum.size()) - 1;
  std::vector<char> diff(static_cast<std::size_t>(2 * span + 1), 0);
  for (auto x : members) {
    for (auto y : members) diff[static_cast<std::size_t>(x - y + span)] = 1;
  }
  std::vector<std::int64_t> out;
  for (std::size_t i = 0; i < diff.size(); ++i) {
    if (diff[i]) out.push_back(static_cast<std::int64_t>(i) - span);
  }
  return out;
}

bool injective_mod(const std::vector<std::int64_t>& values, std::int64_t n, std::vector<char>& scratch) {
  scratch.assign(static_cast<std::size_t>(n), 0);
  for (auto d : values) {
    auto& slot = scratch[static_cast<std::size_t>(mod(d, n))];
    if (slot) return false;
    slot = 1;
  }
  return true;
}

}  // namespace

ModelingResult model_in_cyclic(std::span<const std::int64_t> a_in, int m) {
  if (a_in.empty()) throw std::invalid_argument("model_in_cyclic: empty set");
  if (m < 1 || m > 4) throw std::invalid_argument("model_in_cyclic: order must be in {1,2,3,4}");
  std::vector<std::int64_t> a(a_in.begin(), a_in.end());
  std::sort(a.begin(), a.end());
  a.erase(std::unique(a.begin(), a.end()), a.end());
  const auto lo = a.front();
  const auto diam = a.back() - lo;
  for (auto& v : a) v -= lo;

  ModelingResult res;
  res.order = m;
  res.shift = -lo;
  {
    const auto s = iterated_sum(a, diam, 2);
    const auto count = std::count(s.begin(), s.end(), 1);
    res.doubling_in_z = Rational(count, static_cast<std::int64_t>(a.size()));
  }
  res.baseline_modulus = 2 * m * diam + 1;
  if (diam == 0) {
    res.modulus = 2;
    res.wrap_certificate.assign(static_cast<std::size_t>(m), true);
    return res;
  }

  const auto diffs = difference_values(a, diam, m);
  std::vector<char> scratch;
  std::int64_t best = res.baseline_modulus;
  const auto floor = std::max<std::int64_t>(2, static_cast<std::int64_t>(diffs.size()));
  for (std::int64_t n = res.baseline_modulus - 1; n >= floor; --n) {
    if (injective_mod(diffs, n, scratch)) best = n;
  }
  res.modulus = best;
  for (int mp = 1; mp <= m; ++mp) {
    res.wrap_certificate.push_back(injective_mod(difference_values(a, diam, mp), best, scratch));
  }
  return res;
}

}  // namespace addcomb
