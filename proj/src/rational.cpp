#include <taplab/rational.hpp>

#include <cctype>
#include <limits>
#include <stdexcept>

namespace taplab {

namespace {

bool all_digits(std::string_view s) {
  if (s.empty()) return false;
  for (char c : s) {
    if (!std::isdigit(static_cast<unsigned char>(c))) return false;
  }
  return true;
}

}  // namespace

Rational::Rational(long num, long den) {
  if (den == 0) throw std::domain_error("rational with zero denominator");
  q_ = mpq_class(num, den);
  q_.canonicalize();
}

Rational Rational::parse(std::string_view text) {
  std::string_view body = text;
  bool negative = false;
  if (!body.empty() && body.front() == '-') {
    negative = true;
    body.remove_prefix(1);
  }
  const auto slash = body.find('/');
  std::string_view num = body.substr(0, slash);
  std::string_view den = slash == std::string_view::npos ? std::string_view("1") : body.substr(slash + 1);
  if (!all_digits(num) || !all_digits(den)) {
    throw std::invalid_argument("malformed rational '" + std::string(text) + "'");
  }
  mpz_class n(std::string(num), 10);
  mpz_class d(std::string(den), 10);
  if (d == 0) throw std::invalid_argument("zero denominator in '" + std::string(text) + "'");
  if (negative) n = -n;
  mpq_class q(n, d);
  q.canonicalize();
  return Rational(std::move(q));
}

std::string Rational::str() const {
  if (is_integer()) return q_.get_num().get_str();
  return q_.get_num().get_str() + "/" + q_.get_den().get_str();
}

mpz_class Rational::floor() const {
  mpz_class r;
  mpz_fdiv_q(r.get_mpz_t(), q_.get_num_mpz_t(), q_.get_den_mpz_t());
  return r;
}

mpz_class Rational::ceil() const {
  mpz_class r;
  mpz_cdiv_q(r.get_mpz_t(), q_.get_num_mpz_t(), q_.get_den_mpz_t());
  return r;
}

Rational& Rational::operator/=(const Rational& o) {
  if (o.is_zero()) throw std::domain_error("rational division by zero");
  q_ /= o.q_;
  return *this;
}

Rational from_mpz(const mpz_class& z) { return Rational(mpq_class(z)); }

Rational min(const Rational& a, const Rational& b) { return b < a ? b : a; }
Rational max(const Rational& a, const Rational& b) { return a < b ? b : a; }
Rational abs(const Rational& a) { return a.is_negative() ? -a : a; }

Rational pow2(long e) {
  mpz_class one = 1;
  mpz_class big;
  mpz_mul_2exp(big.get_mpz_t(), one.get_mpz_t(), static_cast<mp_bitcnt_t>(e < 0 ? -e : e));
  if (e >= 0) return from_mpz(big);
  return Rational(mpq_class(one, big));
}

bool is_pow2(const Rational& r) {
  if (!r.is_positive()) return false;
  const mpz_class n = r.numerator();
  const mpz_class d = r.denominator();
  if (n == 1) return mpz_popcount(d.get_mpz_t()) == 1;
  return d == 1 && mpz_popcount(n.get_mpz_t()) == 1;
}

long log2_exact(const Rational& r) {
  if (!is_pow2(r)) throw std::invalid_argument("not a power of two: " + r.str());
  const mpz_class n = r.numerator();
  const mpz_class d = r.denominator();
  if (d == 1) return static_cast<long>(mpz_sizeinbase(n.get_mpz_t(), 2)) - 1;
  return -(static_cast<long>(mpz_sizeinbase(d.get_mpz_t(), 2)) - 1);
}

Rational floor_pow2(const Rational& r) {
  if (!r.is_positive()) throw std::invalid_argument("floor_pow2 of non-positive value");
  // Bit lengths give a guess within one step of the answer.
  const long bn = static_cast<long>(mpz_sizeinbase(r.numerator().get_mpz_t(), 2));
  const long bd = static_cast<long>(mpz_sizeinbase(r.denominator().get_mpz_t(), 2));
  long e = bn - bd;
  while (pow2(e) > r) --e;
  while (pow2(e + 1) <= r) ++e;
  return pow2(e);
}

Rational ceil_pow2(const Rational& r) {
  Rational f = floor_pow2(r);
  return f == r ? f : f * Rational(2);
}

std::int64_t isqrt_floor(std::int64_t n) {
  if (n < 0) throw std::invalid_argument("isqrt of negative value");
  mpz_class z = n;
  mpz_class s;
  mpz_sqrt(s.get_mpz_t(), z.get_mpz_t());
  return s.get_si();
}

std::int64_t isqrt_ceil(std::int64_t n) {
  const std::int64_t f = isqrt_floor(n);
  return f * f == n ? f : f + 1;
}

bool is_perfect_square(std::int64_t n) {
  if (n < 0) return false;
  const std::int64_t f = isqrt_floor(n);
  return f * f == n;
}

std::int64_t to_int64(const mpz_class& z) {
  if (!z.fits_slong_p()) throw std::overflow_error("integer does not fit in 64 bits");
  return z.get_si();
}

}  // namespace taplab
