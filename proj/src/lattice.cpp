#include "maxlat/lattice.hpp"

#include <set>
#include <sstream>

#include "maxlat/errors.hpp"
#include "maxlat/parallel.hpp"
#include "maxlat/symbol.hpp"

namespace maxlat {

bool Box::contains(const Site& n) const {
  for (int i = 0; i < 3; ++i)
    if (n[i] < lo[i] || n[i] > hi[i]) return false;
  return true;
}

bool Box::empty() const { return lo[0] > hi[0] || lo[1] > hi[1] || lo[2] > hi[2]; }

std::size_t Box::count() const {
  if (empty()) return 0;
  std::size_t c = 1;
  for (int i = 0; i < 3; ++i) c *= static_cast<std::size_t>(hi[i] - lo[i] + 1);
  return c;
}

Box Box::shrunk(int width) const {
  return {{lo[0] + width, lo[1] + width, lo[2] + width},
          {hi[0] - width, hi[1] - width, hi[2] - width}};
}

std::vector<Site> Box::sites() const {
  std::vector<Site> out;
  if (empty()) return out;
  out.reserve(count());
  for (int a = lo[0]; a <= hi[0]; ++a)
    for (int b = lo[1]; b <= hi[1]; ++b)
      for (int c = lo[2]; c <= hi[2]; ++c) out.push_back({a, b, c});
  return out;
}

LatticeField::LatticeField(Map values) : values_(std::move(values)) {
  for (auto it = values_.begin(); it != values_.end();)
    it = it->second.isZero(0.0) ? values_.erase(it) : std::next(it);
}

LatticeField LatticeField::delta(const Site& n, int component, Complex value) {
  if (component < 0 || component > 5) throw ShapeError("component index must be in 0..5");
  Vec6c v = Vec6c::Zero();
  v[component] = value;
  LatticeField f;
  f.set(n, v);
  return f;
}

Vec6c LatticeField::at(const Site& n) const {
  auto it = values_.find(n);
  return it == values_.end() ? Vec6c::Zero() : it->second;
}

void LatticeField::set(const Site& n, const Vec6c& v) {
  if (v.isZero(0.0)) {
    values_.erase(n);
  } else {
    values_[n] = v;
  }
}

void LatticeField::add(const Site& n, const Vec6c& v) {
  auto [it, inserted] = values_.try_emplace(n, v);
  if (!inserted) {
    it->second += v;
    if (it->second.isZero(0.0)) values_.erase(it);
  } else if (v.isZero(0.0)) {
    values_.erase(it);
  }
}

std::optional<Box> LatticeField::bounding_box() const {
  if (values_.empty()) return std::nullopt;
  Box b{values_.begin()->first, values_.begin()->first};
  for (const auto& [n, v] : values_) {
    for (int i = 0; i < 3; ++i) {
      b.lo[i] = std::min(b.lo[i], n[i]);
      b.hi[i] = std::max(b.hi[i], n[i]);
    }
  }
  return b;
}

double LatticeField::norm2() const {
  double s = 0.0;
  for (const auto& [n, v] : values_) s += v.squaredNorm();
  return s;
}

double LatticeField::linf_coeff() const {
  double m = 0.0;
  for (const auto& [n, v] : values_) m = std::max(m, v.cwiseAbs().maxCoeff());
  return m;
}

LatticeField& LatticeField::operator+=(const LatticeField& o) {
  for (const auto& [n, v] : o.values_) add(n, v);
  return *this;
}

LatticeField& LatticeField::operator-=(const LatticeField& o) {
  for (const auto& [n, v] : o.values_) add(n, -v);
  return *this;
}

LatticeField& LatticeField::operator*=(Complex s) {
  if (s == Complex(0.0, 0.0)) {
    values_.clear();
    return *this;
  }
  for (auto& [n, v] : values_) v *= s;
  return *this;
}

LatticeField LatticeField::truncated(int radius) const {
  Map m;
  for (const auto& [n, v] : values_)
    if (linf_norm(n) <= radius) m.emplace(n, v);
  return LatticeField(std::move(m));
}

LatticeField LatticeField::pruned(double relative) const {
  const double threshold = relative * linf_coeff();
  Map m;
  for (const auto& [n, v] : values_)
    if (v.cwiseAbs().maxCoeff() > threshold) m.emplace(n, v);
  return LatticeField(std::move(m));
}

Complex inner(const LatticeField& u, const LatticeField& v) {
  Complex s = 0.0;
  for (const auto& [n, a] : u.values()) {
    auto it = v.values().find(n);
    if (it != v.values().end()) s += it->second.dot(a);  // sum a_k conj(b_k)
  }
  return s;
}

Vec6 PerturbedMedia::d(const Site& n) const {
  Vec6 out;
  auto it = local.find(n);
  const Vec3& e = it == local.end() ? background.eps : it->second.eps;
  const Vec3& m = it == local.end() ? background.mu : it->second.mu;
  out << e[0], e[1], e[2], m[0], m[1], m[2];
  return out;
}

void PerturbedMedia::validate() const {
  maxlat::validate(background);
  for (const auto& [n, l] : local) maxlat::validate(Media{l.eps, l.mu});
  for (const auto& [n, v] : potential)
    if (!v.allFinite()) throw InvalidMedia("potential entries must be finite");
}

namespace {

const std::array<Mat6, 3>& h0_units() {
  static const std::array<Mat6, 3> units = [] {
    std::array<Mat6, 3> u;
    for (int j = 0; j < 3; ++j) {
      Vec3 e{0, 0, 0};
      e[j] = 1.0;
      u[j] = h0_from_y(e);
    }
    return u;
  }();
  return units;
}

Site shift(const Site& n, int axis, int by) {
  Site m = n;
  m[axis] += by;
  return m;
}

// Output sites of a nearest-neighbour stencil: support dilated by one along each axis.
std::vector<Site> dilated_support(const LatticeField& field) {
  std::set<Site> s;
  for (const auto& [n, v] : field.values()) {
    s.insert(n);
    for (int j = 0; j < 3; ++j) {
      s.insert(shift(n, j, 1));
      s.insert(shift(n, j, -1));
    }
  }
  return {s.begin(), s.end()};
}

Vec6c h0_at(const LatticeField& field, const Site& m) {
  const Complex inv2i(0.0, -0.5);  // 1/(2i)
  Vec6c acc = Vec6c::Zero();
  for (int j = 0; j < 3; ++j) {
    const Vec6c diff = field.at(shift(m, j, 1)) - field.at(shift(m, j, -1));
    if (!diff.isZero(0.0)) acc += h0_units()[j].cast<Complex>() * (inv2i * diff);
  }
  return acc;
}

template <class Fn>
LatticeField stencil(const LatticeField& field, Fn&& at) {
  const auto sites = dilated_support(field);
  std::vector<Vec6c> out(sites.size());
  parallel_for(sites.size(), [&](std::size_t k) { out[k] = at(sites[k]); });
  LatticeField::Map m;
  for (std::size_t k = 0; k < sites.size(); ++k)
    if (!out[k].isZero(0.0)) m.emplace(sites[k], out[k]);
  return LatticeField(std::move(m));
}

}  // namespace

LatticeField apply_h0(const LatticeField& field) {
  return stencil(field, [&](const Site& m) { return h0_at(field, m); });
}

LatticeField apply_hd(const LatticeField& field, const Media& media) {
  return apply_hd(field, PerturbedMedia(media));
}

LatticeField apply_hd(const LatticeField& field, const PerturbedMedia& media) {
  return stencil(field, [&](const Site& m) {
    Vec6c v = media.d(m).cast<Complex>().asDiagonal() * h0_at(field, m);
    auto it = media.potential.find(m);
    if (it != media.potential.end()) v += it->second.cast<Complex>().asDiagonal() * field.at(m);
    return v;
  });
}

LatticeField residual(const LatticeField& field, const PerturbedMedia& media, double lambda) {
  return stencil(field, [&](const Site& m) {
    const Vec6c u = field.at(m);
    Vec6c v = media.d(m).cast<Complex>().asDiagonal() * h0_at(field, m) - lambda * u;
    auto it = media.potential.find(m);
    if (it != media.potential.end()) v += it->second.cast<Complex>().asDiagonal() * u;
    return v;
  });
}

std::map<Site, Vec6> kernel_multiplier(const PerturbedMedia& media) {
  std::map<Site, Vec6> out;
  Vec6 bg;
  bg << media.background.eps[0], media.background.eps[1], media.background.eps[2],
      media.background.mu[0], media.background.mu[1], media.background.mu[2];
  for (const auto& [n, l] : media.local) {
    out.emplace(n, bg.cwiseQuotient(media.d(n)) - Vec6::Ones());
  }
  return out;
}

std::map<Site, std::array<Rational, 6>> kernel_multiplier_exact(const PerturbedMedia& media) {
  std::map<Site, std::array<Rational, 6>> out;
  const RVec3 be = to_rational(media.background.eps);
  const RVec3 bm = to_rational(media.background.mu);
  for (const auto& [n, l] : media.local) {
    const RVec3 e = to_rational(l.eps);
    const RVec3 m = to_rational(l.mu);
    std::array<Rational, 6> k;
    for (int i = 0; i < 3; ++i) {
      k[i] = be[i] / e[i] - 1;
      k[i + 3] = bm[i] / m[i] - 1;
    }
    out.emplace(n, k);
  }
  return out;
}

std::vector<std::pair<int, double>> besov_profile_l1(const LatticeField& field,
                                                     const std::vector<int>& radii) {
  std::vector<std::pair<int, double>> out;
  for (int r : radii) {
    if (r <= 0) throw PreconditionError("Besov radii must be positive");
    double s = 0.0;
    for (const auto& [n, v] : field.values())
      if (l1_norm(n) < r) s += v.squaredNorm();
    out.emplace_back(r, s / r);
  }
  return out;
}

std::vector<double> shell_profile_linf(const LatticeField& field, int r_max) {
  std::vector<double> out(std::max(0, r_max + 1), 0.0);
  for (const auto& [n, v] : field.values()) {
    const int r = linf_norm(n);
    if (r <= r_max) out[r] = std::max(out[r], v.norm());
  }
  return out;
}

std::array<CPoly, 6> to_trig(const LatticeField& field) {
  std::array<CPoly::Map, 6> maps;
  for (const auto& [n, v] : field.values())
    for (int k = 0; k < 6; ++k)
      if (v[k] != Complex(0.0, 0.0)) maps[k].emplace(-n, v[k]);
  std::array<CPoly, 6> out;
  for (int k = 0; k < 6; ++k) out[k] = CPoly(std::move(maps[k]), 0.0);
  return out;
}

LatticeField from_trig(const std::array<CPoly, 6>& components) {
  LatticeField::Map m;
  for (int k = 0; k < 6; ++k) {
    for (const auto& [n, c] : components[k].terms()) {
      auto [it, inserted] = m.try_emplace(-n, Vec6c::Zero());
      it->second[k] = c;
    }
  }
  return LatticeField(std::move(m));
}

std::vector<Vec6c> sample_field(const LatticeField& field, int n) {
  const auto comps = to_trig(field);
  std::vector<Vec6c> out(static_cast<std::size_t>(n) * n * n, Vec6c::Zero());
  for (int k = 0; k < 6; ++k) {
    if (comps[k].is_zero()) continue;
    const auto s = to_samples(comps[k], n);
    for (std::size_t i = 0; i < s.size(); ++i) out[i][k] = s[i];
  }
  return out;
}

Eigen::VectorXcd to_dense(const LatticeField& field, const Box& box) {
  Eigen::VectorXcd v = Eigen::VectorXcd::Zero(static_cast<Eigen::Index>(box.count() * 6));
  const int sy = box.hi[1] - box.lo[1] + 1;
  const int sz = box.hi[2] - box.lo[2] + 1;
  for (const auto& [n, val] : field.values()) {
    if (!box.contains(n)) throw ShapeError("field support exceeds the dense box");
    const std::size_t idx =
        ((static_cast<std::size_t>(n[0] - box.lo[0]) * sy) + (n[1] - box.lo[1])) * sz +
        (n[2] - box.lo[2]);
    v.segment<6>(static_cast<Eigen::Index>(idx * 6)) = val;
  }
  return v;
}

LatticeField from_dense(const Eigen::VectorXcd& v, const Box& box) {
  if (static_cast<std::size_t>(v.size()) != box.count() * 6) {
    throw ShapeError("dense vector length does not match the box");
  }
  LatticeField::Map m;
  const auto sites = box.sites();
  for (std::size_t k = 0; k < sites.size(); ++k) {
    Vec6c val = v.segment<6>(static_cast<Eigen::Index>(k * 6));
    if (!val.isZero(0.0)) m.emplace(sites[k], val);
  }
  return LatticeField(std::move(m));
}

std::string to_json_lines(const LatticeField& field) {
  std::ostringstream os;
  for (const auto& [n, v] : field.values()) {
    std::vector<double> flat;
    for (int k = 0; k < 6; ++k) {
      flat.push_back(v[k].real());
      flat.push_back(v[k].imag());
    }
    os << nlohmann::json{{"n", n}, {"v", flat}}.dump() << '\n';
  }
  return os.str();
}

LatticeField field_from_json_lines(const std::string& text) {
  std::istringstream is(text);
  std::string line;
  LatticeField out;
  while (std::getline(is, line)) {
    if (line.find_first_not_of(" \t\r") == std::string::npos) continue;
    const auto j = nlohmann::json::parse(line);
    const auto flat = j.at("v").get<std::vector<double>>();
    if (flat.size() != 12) throw ShapeError("field line needs 12 reals in \"v\"");
    Vec6c v;
    for (int k = 0; k < 6; ++k) v[k] = Complex(flat[2 * k], flat[2 * k + 1]);
    out.add(j.at("n").get<Site>(), v);
  }
  return out;
}

PerturbedMedia perturbation_from_json(const nlohmann::json& j, const Media& background) {
  PerturbedMedia pm(background);
  if (!j.is_object() || !j.contains("sites") || !j.at("sites").is_array()) {
    throw InvalidMedia("perturbation JSON needs a \"sites\" list");
  }
  for (const auto& s : j.at("sites")) {
    LocalMedia l{s.at("eps").get<Vec3>(), s.at("mu").get<Vec3>()};
    validate(Media{l.eps, l.mu});
    pm.local[s.at("n").get<Site>()] = l;
  }
  return pm;
}

nlohmann::json perturbation_to_json(const PerturbedMedia& media) {
  auto sites = nlohmann::json::array();
  for (const auto& [n, l] : media.local) sites.push_back({{"n", n}, {"eps", l.eps}, {"mu", l.mu}});
  return {{"sites", sites}};
}

}  // namespace maxlat
