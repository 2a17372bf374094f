#pragma once

#include <gmpxx.h>

#include <string>

namespace pchain::linalg {

// All ring elements are stored as rationals. Over Integers and PrimeField the
// denominator is always 1; over PrimeField the numerator lies in [0, p).
using Scalar = mpq_class;

class Ring {
public:
  enum class Kind { Integers, Rationals, PrimeField };

  Ring() = default;
  static Ring integers() { return Ring(Kind::Integers, 0); }
  static Ring rationals() { return Ring(Kind::Rationals, 0); }
  static Ring prime_field(long p);
  // "Z", "Q", "Fp:p"
  static Ring parse(const std::string& tag);

  Kind kind() const { return kind_; }
  long p() const { return p_; }
  bool is_field() const { return kind_ != Kind::Integers; }
  bool is_integers() const { return kind_ == Kind::Integers; }
  std::string tag() const;

  bool operator==(const Ring& o) const { return kind_ == o.kind_ && p_ == o.p_; }
  bool operator!=(const Ring& o) const { return !(*this == o); }

  Scalar from_int(long v) const;
  Scalar from_mpz(const mpz_class& v) const;
  // Brings an arbitrary rational into canonical form; throws for non-integral
  // input over Integers and for denominators divisible by p over PrimeField.
  void normalize(Scalar& x) const;

  void add(Scalar& acc, const Scalar& a) const;
  void sub(Scalar& acc, const Scalar& a) const;
  void addmul(Scalar& acc, const Scalar& a, const Scalar& b) const;
  void submul(Scalar& acc, const Scalar& a, const Scalar& b) const;
  Scalar mul(const Scalar& a, const Scalar& b) const;
  Scalar neg(const Scalar& a) const;

  bool is_unit(const Scalar& a) const;
  Scalar inverse(const Scalar& a) const;
  // Order key for pivot selection: smaller is preferred.
  int cmp_size(const Scalar& a, const Scalar& b) const;

private:
  Ring(Kind k, long p) : kind_(k), p_(p) {}
  void reduce_mod(mpz_class& v) const;

  Kind kind_ = Kind::Integers;
  long p_ = 0;
};

bool is_prime(long n);

} // namespace pchain::linalg
