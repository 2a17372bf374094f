#include "pchain/ring.hpp"

#include "pchain/error.hpp"

namespace pchain {

const char* error_kind_name(ErrorKind k) {
  switch (k) {
  case ErrorKind::CompositionNonzero: return "CompositionNonzero";
  case ErrorKind::DimensionMismatch: return "DimensionMismatch";
  case ErrorKind::NotASubmodule: return "NotASubmodule";
  case ErrorKind::RingMismatch: return "RingMismatch";
  case ErrorKind::UnboundedChains: return "UnboundedChains";
  case ErrorKind::GroupTooLarge: return "GroupTooLarge";
  case ErrorKind::BaseMismatch: return "BaseMismatch";
  case ErrorKind::NotAFunctor: return "NotAFunctor";
  case ErrorKind::VarianceMismatch: return "VarianceMismatch";
  case ErrorKind::NotLeftFree: return "NotLeftFree";
  case ErrorKind::ComparisonFailed: return "ComparisonFailed";
  case ErrorKind::NotTwoColumn: return "NotTwoColumn";
  case ErrorKind::FamilyMismatch: return "FamilyMismatch";
  case ErrorKind::LiftFailed: return "LiftFailed";
  case ErrorKind::ParseError: return "ParseError";
  case ErrorKind::ValidationError: return "ValidationError";
  case ErrorKind::InvalidArgument: return "InvalidArgument";
  }
  return "Error";
}

} // namespace pchain

namespace pchain::linalg {

bool is_prime(long n) {
  if (n < 2) return false;
  for (long d = 2; d * d <= n; ++d)
    if (n % d == 0) return false;
  return true;
}

Ring Ring::prime_field(long p) {
  if (!is_prime(p)) fail(ErrorKind::InvalidArgument, "characteristic " + std::to_string(p) + " is not prime");
  return Ring(Kind::PrimeField, p);
}

Ring Ring::parse(const std::string& tag) {
  if (tag == "Z") return integers();
  if (tag == "Q") return rationals();
  if (tag.rfind("Fp:", 0) == 0 || tag.rfind("F:", 0) == 0) {
    auto pos = tag.find(':');
    long p = 0;
    try {
      p = std::stol(tag.substr(pos + 1));
    } catch (...) {
      fail(ErrorKind::InvalidArgument, "bad ring tag '" + tag + "'");
    }
    return prime_field(p);
  }
  fail(ErrorKind::InvalidArgument, "unknown ring '" + tag + "'");
}

std::string Ring::tag() const {
  switch (kind_) {
  case Kind::Integers: return "Z";
  case Kind::Rationals: return "Q";
  case Kind::PrimeField: return "Fp:" + std::to_string(p_);
  }
  return "?";
}

void Ring::reduce_mod(mpz_class& v) const {
  mpz_fdiv_r_ui(v.get_mpz_t(), v.get_mpz_t(), static_cast<unsigned long>(p_));
}

Scalar Ring::from_int(long v) const {
  Scalar x(v);
  if (kind_ == Kind::PrimeField) reduce_mod(x.get_num());
  return x;
}

Scalar Ring::from_mpz(const mpz_class& v) const {
  Scalar x(v);
  if (kind_ == Kind::PrimeField) reduce_mod(x.get_num());
  return x;
}

void Ring::normalize(Scalar& x) const {
  x.canonicalize();
  switch (kind_) {
  case Kind::Integers:
    if (x.get_den() != 1) fail(ErrorKind::InvalidArgument, "non-integral entry over Z");
    break;
  case Kind::Rationals: break;
  case Kind::PrimeField: {
    mpz_class d = x.get_den();
    reduce_mod(d);
    if (d == 0) fail(ErrorKind::InvalidArgument, "denominator divisible by p");
    mpz_class inv;
    mpz_class pp(p_);
    mpz_invert(inv.get_mpz_t(), d.get_mpz_t(), pp.get_mpz_t());
    mpz_class n = x.get_num() * inv;
    reduce_mod(n);
    x = Scalar(n);
    break;
  }
  }
}

void Ring::add(Scalar& acc, const Scalar& a) const {
  if (kind_ == Kind::Rationals) {
    acc += a;
    return;
  }
  acc.get_num() += a.get_num();
  if (kind_ == Kind::PrimeField) reduce_mod(acc.get_num());
}

void Ring::sub(Scalar& acc, const Scalar& a) const {
  if (kind_ == Kind::Rationals) {
    acc -= a;
    return;
  }
  acc.get_num() -= a.get_num();
  if (kind_ == Kind::PrimeField) reduce_mod(acc.get_num());
}

void Ring::addmul(Scalar& acc, const Scalar& a, const Scalar& b) const {
  if (kind_ == Kind::Rationals) {
    acc += a * b;
    return;
  }
  mpz_addmul(acc.get_num_mpz_t(), a.get_num_mpz_t(), b.get_num_mpz_t());
  if (kind_ == Kind::PrimeField) reduce_mod(acc.get_num());
}

void Ring::submul(Scalar& acc, const Scalar& a, const Scalar& b) const {
  if (kind_ == Kind::Rationals) {
    acc -= a * b;
    return;
  }
  mpz_submul(acc.get_num_mpz_t(), a.get_num_mpz_t(), b.get_num_mpz_t());
  if (kind_ == Kind::PrimeField) reduce_mod(acc.get_num());
}

Scalar Ring::mul(const Scalar& a, const Scalar& b) const {
  if (kind_ == Kind::Rationals) return a * b;
  Scalar r;
  mpz_mul(r.get_num_mpz_t(), a.get_num_mpz_t(), b.get_num_mpz_t());
  if (kind_ == Kind::PrimeField) reduce_mod(r.get_num());
  return r;
}

Scalar Ring::neg(const Scalar& a) const {
  if (kind_ == Kind::Rationals) return -a;
  Scalar r;
  mpz_neg(r.get_num_mpz_t(), a.get_num_mpz_t());
  if (kind_ == Kind::PrimeField) reduce_mod(r.get_num());
  return r;
}

bool Ring::is_unit(const Scalar& a) const {
  if (kind_ == Kind::Integers) return a == 1 || a == -1;
  return sgn(a) != 0;
}

Scalar Ring::inverse(const Scalar& a) const {
  switch (kind_) {
  case Kind::Integers:
    if (a == 1 || a == -1) return a;
    fail(ErrorKind::InvalidArgument, "not a unit in Z");
  case Kind::Rationals:
    if (sgn(a) == 0) fail(ErrorKind::InvalidArgument, "division by zero");
    return 1 / a;
  case Kind::PrimeField: {
    if (sgn(a) == 0) fail(ErrorKind::InvalidArgument, "division by zero");
    mpz_class inv;
    mpz_class pp(p_);
    mpz_invert(inv.get_mpz_t(), a.get_num_mpz_t(), pp.get_mpz_t());
    return Scalar(inv);
  }
  }
  return a;
}

int Ring::cmp_size(const Scalar& a, const Scalar& b) const {
  if (kind_ == Kind::Rationals) return cmp(abs(a), abs(b));
  return mpz_cmpabs(a.get_num_mpz_t(), b.get_num_mpz_t());
}

} // namespace pchain::linalg
