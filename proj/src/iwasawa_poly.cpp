#include "iwalog/iwasawa_poly.hpp"

#include <algorithm>
#include <numeric>
#include <sstream>

namespace iwalog {

using detail::ScaledVector;

namespace {

long pow_long(unsigned p, int k) {
  long r = 1;
  for (int i = 0; i < k; ++i) r *= static_cast<long>(p);
  return r;
}

int lower_bound_of(const ScaledVector& v) { return v.is_zero() ? v.prec : v.shift; }

std::optional<int> min_cap(std::optional<int> a, std::optional<int> b) {
  if (a && b) return std::min(*a, *b);
  return a ? a : b;
}

// Copies a dense nx-by-ny block into a larger layout.
std::vector<mpz_class> relayout(const std::vector<mpz_class>& c, int nx, int ny, int new_nx, int new_ny) {
  std::vector<mpz_class> out(static_cast<std::size_t>(new_nx) * new_ny);
  for (int j = 0; j < std::min(ny, new_ny); ++j) {
    for (int i = 0; i < std::min(nx, new_nx); ++i) {
      out[static_cast<std::size_t>(j) * new_nx + i] = c[static_cast<std::size_t>(j) * nx + i];
    }
  }
  return out;
}

void require_same_prime(unsigned a, unsigned b) {
  if (a != b) throw StructuralError("prime mismatch: " + std::to_string(a) + " vs " + std::to_string(b));
}

}  // namespace

const char* var_name(Var v) { return v == Var::X ? "X" : "Y"; }

CharacterPoint CharacterPoint::make(unsigned p, int r, int s, long a, long b) {
  if (r < 0 || s < 0) throw StructuralError("negative character order");
  if (r > 0 && a % static_cast<long>(p) == 0) throw StructuralError("w1 exponent divisible by p");
  if (s > 0 && b % static_cast<long>(p) == 0) throw StructuralError("w2 exponent divisible by p");
  CharacterPoint w;
  w.p = p;
  w.r = r;
  w.s = s;
  w.a = r > 0 ? ((a % pow_long(p, r)) + pow_long(p, r)) % pow_long(p, r) : 1;
  w.b = s > 0 ? ((b % pow_long(p, s)) + pow_long(p, s)) % pow_long(p, s) : 1;
  return w;
}

std::string CharacterPoint::conductor() const {
  return "p^" + std::to_string(r + 1) + "(p^c)^" + std::to_string(s + 1);
}

std::string CharacterPoint::to_string() const {
  auto coord = [&](int order, long e) {
    if (order == 0) return std::string("1");
    return "zeta_" + std::to_string(pow_long(p, order)) + (e == 1 ? "" : "^" + std::to_string(e));
  };
  return "(" + coord(r, a) + "," + coord(s, b) + ")";
}

// ---------------------------------------------------------------------------

IwasawaPoly IwasawaPoly::exact_zero(unsigned p) { return IwasawaPoly(ScaledVector::make_exact_zero(p, 1), 1, 1); }

IwasawaPoly IwasawaPoly::zero(unsigned p, int precision) {
  return IwasawaPoly(ScaledVector::make_zero(p, 1, precision), 1, 1);
}

IwasawaPoly IwasawaPoly::constant(const PAdicScalar& c) { return monomial(c.prime(), 0, 0, c); }

IwasawaPoly IwasawaPoly::from_integer(unsigned p, const mpz_class& n, int precision) {
  return constant(PAdicScalar::from_integer(p, n, precision));
}

IwasawaPoly IwasawaPoly::variable(unsigned p, Var v, int precision) {
  const PAdicScalar one = PAdicScalar::from_integer(p, 1, precision);
  return v == Var::X ? monomial(p, 1, 0, one) : monomial(p, 0, 1, one);
}

IwasawaPoly IwasawaPoly::monomial(unsigned p, int i, int j, const PAdicScalar& c) {
  return from_terms(p, {PolyTerm{i, j, c}});
}

IwasawaPoly IwasawaPoly::from_terms(unsigned p, const std::vector<PolyTerm>& terms) {
  int prec = kInfinitePrecision;
  int shift = kInfinitePrecision;
  int nx = 1;
  int ny = 1;
  bool all_exact = true;
  for (const auto& t : terms) {
    require_same_prime(p, t.coeff.prime());
    if (t.i < 0 || t.j < 0) throw StructuralError("negative monomial exponent");
    if (t.coeff.is_exact_zero()) continue;
    all_exact = false;
    prec = std::min(prec, t.coeff.precision());
    shift = std::min(shift, t.coeff.valuation_lower_bound());
    nx = std::max(nx, t.i + 1);
    ny = std::max(ny, t.j + 1);
  }
  if (all_exact) return exact_zero(p);
  if (shift >= prec) return zero(p, prec);
  ScaledVector v = ScaledVector::make_zero(p, static_cast<std::size_t>(nx) * ny, prec);
  v.shift = shift;
  for (const auto& t : terms) {
    if (t.coeff.is_exact_zero()) continue;
    v.c[static_cast<std::size_t>(t.j) * nx + t.i] += detail::scaled_residue(t.coeff, shift);
  }
  v.normalize();
  IwasawaPoly f(std::move(v), nx, ny);
  f.trim();
  return f;
}

IwasawaPoly IwasawaPoly::univariate(unsigned p, Var var, const std::vector<mpz_class>& coeffs, int precision) {
  const int n = std::max<int>(1, static_cast<int>(coeffs.size()));
  ScaledVector v = ScaledVector::make_zero(p, static_cast<std::size_t>(n), precision);
  v.shift = 0;
  for (std::size_t k = 0; k < coeffs.size(); ++k) v.c[k] = coeffs[k];
  v.normalize();
  IwasawaPoly f = var == Var::X ? IwasawaPoly(std::move(v), n, 1) : IwasawaPoly(std::move(v), 1, n);
  f.trim();
  return f;
}

IwasawaPoly IwasawaPoly::shifted_cyclotomic(unsigned p, int n, Var v, int precision) {
  return univariate(p, v, shifted_cyclotomic_mod(p, n, precision), precision);
}

void IwasawaPoly::trim() {
  if (v_.is_zero()) {
    v_.c.assign(1, 0);
    nx_ = ny_ = 1;
    return;
  }
  int mx = 0;
  int my = 0;
  for (int j = 0; j < ny_; ++j) {
    for (int i = 0; i < nx_; ++i) {
      if (v_.c[static_cast<std::size_t>(j) * nx_ + i] != 0) {
        mx = std::max(mx, i);
        my = std::max(my, j);
      }
    }
  }
  if (mx + 1 == nx_ && my + 1 == ny_) return;
  v_.c = relayout(v_.c, nx_, ny_, mx + 1, my + 1);
  nx_ = mx + 1;
  ny_ = my + 1;
}

int IwasawaPoly::degree(Var v) const {
  if (is_zero()) return -1;
  return v == Var::X ? nx_ - 1 : ny_ - 1;
}

PAdicScalar IwasawaPoly::coefficient(int i, int j) const {
  if (v_.exact_zero) return PAdicScalar::exact_zero(v_.p);
  if (i < 0 || j < 0 || i >= nx_ || j >= ny_) return PAdicScalar::zero(v_.p, v_.prec);
  return v_.scalar_at(static_cast<std::size_t>(j) * nx_ + i);
}

std::vector<PolyTerm> IwasawaPoly::terms() const {
  std::vector<PolyTerm> out;
  if (is_zero()) return out;
  for (int j = 0; j < ny_; ++j) {
    for (int i = 0; i < nx_; ++i) {
      if (v_.c[static_cast<std::size_t>(j) * nx_ + i] != 0) out.push_back({i, j, coefficient(i, j)});
    }
  }
  return out;
}

IwasawaPoly IwasawaPoly::with_caps(std::optional<int> cap_x, std::optional<int> cap_y) const {
  IwasawaPoly f = *this;
  f.cap_x_ = min_cap(cap_x_, cap_x);
  f.cap_y_ = min_cap(cap_y_, cap_y);
  if (f.v_.exact_zero) return f;
  const int nx = f.cap_x_ ? std::min(nx_, *f.cap_x_ + 1) : nx_;
  const int ny = f.cap_y_ ? std::min(ny_, *f.cap_y_ + 1) : ny_;
  if (nx != nx_ || ny != ny_) {
    f.v_.c = relayout(v_.c, nx_, ny_, nx, ny);
    f.nx_ = nx;
    f.ny_ = ny;
    f.v_.normalize();
    f.trim();
  }
  return f;
}

IwasawaPoly IwasawaPoly::with_precision(int precision) const {
  if (v_.exact_zero || precision >= v_.prec) return *this;
  IwasawaPoly f = *this;
  f.v_.prec = precision;
  f.v_.normalize();
  f.trim();
  return f;
}

bool IwasawaPoly::equals_to_precision(const IwasawaPoly& other) const { return (*this - other).is_zero(); }

std::string IwasawaPoly::serialize() const {
  if (v_.exact_zero) return "exact0";
  if (v_.is_zero()) return "zero|" + std::to_string(v_.prec);
  std::ostringstream os;
  bool first = true;
  for (const auto& t : terms()) {
    if (!first) os << ';';
    first = false;
    os << '{' << t.i << ',' << t.j << ',' << t.coeff.serialize() << '}';
  }
  return os.str();
}

std::string IwasawaPoly::to_string() const {
  if (v_.exact_zero) return "0 (exact)";
  const std::string big_o = "O(" + std::to_string(v_.p) + "^" + std::to_string(v_.prec) + ")";
  if (v_.is_zero()) return big_o;
  std::ostringstream os;
  const mpz_class& mod = prime_power(v_.p, v_.prec);
  bool first = true;
  for (const auto& t : terms()) {
    if (!first) os << " + ";
    first = false;
    if (t.coeff.valuation_lower_bound() >= 0) {
      mpz_class r = t.coeff.residue();
      // Print small negatives as such.
      if (2 * r > mod) r -= mod;
      os << r.get_str();
    } else {
      os << '(' << t.coeff.to_string() << ')';
    }
    if (t.i > 0) os << "*X" << (t.i > 1 ? "^" + std::to_string(t.i) : "");
    if (t.j > 0) os << "*Y" << (t.j > 1 ? "^" + std::to_string(t.j) : "");
  }
  return os.str() + " + " + big_o;
}

IwasawaPoly IwasawaPoly::operator-() const {
  IwasawaPoly f = *this;
  f.v_ = detail::negate(v_);
  return f;
}

IwasawaPoly operator+(const IwasawaPoly& a, const IwasawaPoly& b) {
  require_same_prime(a.prime(), b.prime());
  const auto cx = min_cap(a.cap_x_, b.cap_x_);
  const auto cy = min_cap(a.cap_y_, b.cap_y_);
  if (a.is_exact_zero()) return b.with_caps(cx, cy);
  if (b.is_exact_zero()) return a.with_caps(cx, cy);
  const int nx = std::max(a.nx_, b.nx_);
  const int ny = std::max(a.ny_, b.ny_);
  ScaledVector va = a.v_;
  ScaledVector vb = b.v_;
  if (a.nx_ != nx || a.ny_ != ny) va.c = relayout(a.v_.c, a.nx_, a.ny_, nx, ny);
  if (b.nx_ != nx || b.ny_ != ny) vb.c = relayout(b.v_.c, b.nx_, b.ny_, nx, ny);
  IwasawaPoly f(detail::add(va, vb), nx, ny);
  f.trim();
  return f.with_caps(cx, cy);
}

IwasawaPoly operator-(const IwasawaPoly& a, const IwasawaPoly& b) { return a + (-b); }

IwasawaPoly operator*(const IwasawaPoly& a, const IwasawaPoly& b) {
  require_same_prime(a.prime(), b.prime());
  const unsigned p = a.prime();
  const auto cx = min_cap(a.cap_x_, b.cap_x_);
  const auto cy = min_cap(a.cap_y_, b.cap_y_);
  if (a.is_exact_zero() || b.is_exact_zero()) return IwasawaPoly::exact_zero(p).with_caps(cx, cy);
  const int prec = std::min(a.v_.prec + lower_bound_of(b.v_), b.v_.prec + lower_bound_of(a.v_));
  if (a.is_zero() || b.is_zero()) return IwasawaPoly::zero(p, prec).with_caps(cx, cy);
  int nx = a.nx_ + b.nx_ - 1;
  int ny = a.ny_ + b.ny_ - 1;
  if (cx) nx = std::min(nx, *cx + 1);
  if (cy) ny = std::min(ny, *cy + 1);
  if (static_cast<long>(nx) * ny > IwasawaPoly::kMaxDenseTerms) {
    throw CapOverflowError("polynomial product exceeds " + std::to_string(IwasawaPoly::kMaxDenseTerms) +
                           " dense terms; set degree caps");
  }
  struct Entry {
    int i, j;
    const mpz_class* c;
  };
  std::vector<Entry> bt;
  for (int j = 0; j < b.ny_; ++j) {
    for (int i = 0; i < b.nx_; ++i) {
      const mpz_class& c = b.v_.c[static_cast<std::size_t>(j) * b.nx_ + i];
      if (c != 0) bt.push_back({i, j, &c});
    }
  }
  std::vector<mpz_class> acc(static_cast<std::size_t>(nx) * ny);
  for (int ja = 0; ja < a.ny_ && ja < ny; ++ja) {
    for (int ia = 0; ia < a.nx_ && ia < nx; ++ia) {
      const mpz_class& x = a.v_.c[static_cast<std::size_t>(ja) * a.nx_ + ia];
      if (x == 0) continue;
      for (const auto& e : bt) {
        const int i = ia + e.i;
        const int j = ja + e.j;
        if (i >= nx || j >= ny) continue;
        mpz_addmul(acc[static_cast<std::size_t>(j) * nx + i].get_mpz_t(), x.get_mpz_t(), e.c->get_mpz_t());
      }
    }
  }
  ScaledVector v;
  v.p = p;
  v.prec = prec;
  v.shift = a.v_.shift + b.v_.shift;
  v.exact_zero = false;
  v.c = std::move(acc);
  v.normalize();
  IwasawaPoly f(std::move(v), nx, ny);
  f.cap_x_ = cx;
  f.cap_y_ = cy;
  f.trim();
  return f;
}

IwasawaPoly operator*(const PAdicScalar& c, const IwasawaPoly& f) { return IwasawaPoly::constant(c) * f; }

ScaledVector IwasawaPoly::remainder_mod_cyclotomic(Var var, int r) const {
  if (r < 1) throw StructuralError("remainder modulo cyclotomic needs r >= 1");
  if (!is_univariate_in(var)) throw StructuralError("remainder of a bivariate polynomial");
  const long phi = phi_prime_power(v_.p, r);
  ScaledVector out = ScaledVector::make_zero(v_.p, static_cast<std::size_t>(phi), v_.prec);
  out.exact_zero = v_.exact_zero;
  if (v_.is_zero()) return out;
  out.shift = v_.shift;
  const int rel = v_.prec - v_.shift;
  const mpz_class& mod = prime_power(v_.p, rel);
  const int deg = degree(var);
  std::vector<mpz_class> c(static_cast<std::size_t>(std::max<long>(deg + 1, phi)));
  for (int k = 0; k <= deg; ++k) c[k] = var == Var::X ? v_.c[k] : v_.c[static_cast<std::size_t>(k) * nx_];
  const auto& d = shifted_cyclotomic_mod(v_.p, r, rel);
  for (long e = deg; e >= phi; --e) {
    mpz_mod(c[e].get_mpz_t(), c[e].get_mpz_t(), mod.get_mpz_t());
    if (c[e] == 0) continue;
    for (long k = 0; k < phi; ++k) {
      if (d[k] != 0) mpz_submul(c[e - phi + k].get_mpz_t(), c[e].get_mpz_t(), d[k].get_mpz_t());
    }
    c[e] = 0;
  }
  c.resize(static_cast<std::size_t>(phi));
  out.c = std::move(c);
  return out;
}

IwasawaPoly IwasawaPoly::x_slice(int j) const {
  ScaledVector v = v_;
  v.c.assign(v_.c.begin() + static_cast<long>(j) * nx_, v_.c.begin() + static_cast<long>(j + 1) * nx_);
  v.normalize();
  IwasawaPoly f(std::move(v), nx_, 1);
  f.trim();
  return f;
}

IwasawaPoly poly_arith(const IwasawaPoly& f, const IwasawaPoly& g, PolyOp op) {
  return op == PolyOp::Add ? f + g : f * g;
}

namespace {

CycloElement eval_univariate(const IwasawaPoly& f, Var v, const CharacterPoint& w, int level) {
  const unsigned p = f.prime();
  if (f.is_exact_zero()) return CycloElement::exact_zero(p, level);
  const int r = w.order(v);
  if (r == 0) return CycloElement::from_scalar(f.constant_term(), level);
  CycloElement e = CycloElement::from_raw(f.remainder_mod_cyclotomic(v, r), r, true);
  return e.galois(w.exponent(v)).embed(level);
}

}  // namespace

CycloElement eval_at_character(const IwasawaPoly& f, const CharacterPoint& w) {
  require_same_prime(f.prime(), w.p);
  const int level = w.level();
  if (f.is_univariate_in(Var::Y)) return eval_univariate(f, Var::Y, w, level);
  if (f.is_univariate_in(Var::X)) return eval_univariate(f, Var::X, w, level);
  const int ny = f.degree(Var::Y) + 1;
  if (w.s == 0) return eval_univariate(f.x_slice(0), Var::X, w, level);
  const CycloElement step =
      CycloElement::zeta_power(f.prime(), level, w.b * pow_long(f.prime(), level - w.s), f.precision()) -
      CycloElement::from_integer(f.prime(), level, 1, f.precision());
  CycloElement acc = eval_univariate(f.x_slice(ny - 1), Var::X, w, level);
  for (int j = ny - 2; j >= 0; --j) acc = acc * step + eval_univariate(f.x_slice(j), Var::X, w, level);
  return acc;
}

IwasawaPoly omega(unsigned p, int n, Var v, int precision) {
  if (n < 0) throw StructuralError("omega level must be >= 0");
  const long q = pow_long(p, n);
  std::vector<mpz_class> c(static_cast<std::size_t>(q + 1));
  mpz_class b = 1;
  for (long k = 0; k <= q; ++k) {
    c[k] = b;
    b *= (q - k);
    mpz_divexact_ui(b.get_mpz_t(), b.get_mpz_t(), static_cast<unsigned long>(k + 1));
  }
  c[0] = 0;
  return IwasawaPoly::univariate(p, v, c, precision);
}

}  // namespace iwalog
