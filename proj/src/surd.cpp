#include "lll/surd.hpp"

#include <cmath>
#include <stdexcept>
#include <string_view>

#include "lll/errors.hpp"

namespace lll {

namespace {

// Largest s with s*s dividing r, so that √r = s·√(r/s²).
unsigned long square_part(unsigned long r) {
  unsigned long s = 1;
  for (unsigned long f = 2; f * f <= r; ++f) {
    while (r % (f * f) == 0) {
      r /= f * f;
      s *= f;
    }
  }
  return s;
}

}  // namespace

Surd::Surd(mpq_class rational, mpq_class irrational, unsigned long radicand)
    : rational_(std::move(rational)),
      irrational_(std::move(irrational)),
      radicand_(radicand) {
  if (radicand_ == 0) {
    irrational_ = 0;
    radicand_ = 1;
  }
  canonicalize();
}

Surd Surd::root(unsigned long radicand, mpq_class coefficient) {
  return Surd(0, std::move(coefficient), radicand);
}

void Surd::canonicalize() {
  rational_.canonicalize();
  irrational_.canonicalize();
  if (irrational_ == 0) {
    radicand_ = 1;
    return;
  }
  const unsigned long s = square_part(radicand_);
  if (s > 1) {
    irrational_ *= s;
    radicand_ /= s * s;
  }
  if (radicand_ == 1) {
    rational_ += irrational_;
    irrational_ = 0;
  }
}

void Surd::merge_radicand(const Surd& other) {
  if (other.irrational_ == 0) return;
  if (irrational_ == 0) {
    radicand_ = other.radicand_;
    return;
  }
  if (radicand_ != other.radicand_) {
    throw std::logic_error("Surd: mixed radicands");
  }
}

int Surd::sign() const {
  const int sa = sgn(rational_);
  const int sb = sgn(irrational_);
  if (sb == 0) return sa;
  if (sa == 0 || sa == sb) return sb;
  // Opposite signs: compare a² with b²·r.
  const mpq_class a2 = rational_ * rational_;
  const mpq_class b2r = irrational_ * irrational_ * radicand_;
  if (a2 > b2r) return sa;
  if (a2 < b2r) return sb;
  return 0;
}

double Surd::to_double() const {
  return rational_.get_d() +
         irrational_.get_d() * std::sqrt(static_cast<double>(radicand_));
}

std::string rational_string(const mpq_class& value) {
  return value.get_num().get_str() + "/" + value.get_den().get_str();
}

std::string Surd::to_string() const {
  const std::string root = "·√" + std::to_string(radicand_);
  if (irrational_ == 0) return rational_string(rational_);
  if (rational_ == 0) return rational_string(irrational_) + root;
  std::string out = rational_string(rational_);
  if (irrational_ > 0) out += "+";
  return out + rational_string(irrational_) + root;
}

Surd Surd::operator-() const {
  Surd out = *this;
  out.rational_ = -out.rational_;
  out.irrational_ = -out.irrational_;
  return out;
}

Surd& Surd::operator+=(const Surd& other) {
  merge_radicand(other);
  rational_ += other.rational_;
  irrational_ += other.irrational_;
  if (irrational_ == 0) radicand_ = 1;
  return *this;
}

Surd& Surd::operator-=(const Surd& other) {
  merge_radicand(other);
  rational_ -= other.rational_;
  irrational_ -= other.irrational_;
  if (irrational_ == 0) radicand_ = 1;
  return *this;
}

Surd& Surd::operator*=(const Surd& other) {
  if (other.irrational_ == 0) {
    rational_ *= other.rational_;
    irrational_ *= other.rational_;
    if (irrational_ == 0) radicand_ = 1;
    return *this;
  }
  merge_radicand(other);
  const unsigned long r = radicand_;
  mpq_class a = rational_ * other.rational_ + irrational_ * other.irrational_ * r;
  mpq_class b = rational_ * other.irrational_ + irrational_ * other.rational_;
  rational_ = std::move(a);
  irrational_ = std::move(b);
  canonicalize();
  return *this;
}

Surd& Surd::operator/=(const mpq_class& divisor) {
  if (divisor == 0) throw std::domain_error("Surd: division by zero");
  rational_ /= divisor;
  irrational_ /= divisor;
  return *this;
}

Surd Surd::inverse() const {
  if (is_zero()) throw std::domain_error("Surd: inverse of zero");
  if (irrational_ == 0) return Surd(1 / rational_);
  // 1/(a + b√r) = (a - b√r)/(a² - b²r); the norm is nonzero for squarefree r.
  const mpq_class norm = rational_ * rational_ - irrational_ * irrational_ * radicand_;
  return Surd(rational_ / norm, -irrational_ / norm, radicand_);
}

bool operator==(const Surd& a, const Surd& b) {
  if (a.rational_ != b.rational_ || a.irrational_ != b.irrational_) return false;
  return a.irrational_ == 0 || a.radicand_ == b.radicand_;
}

Surd parse_surd(const std::string& text) {
  auto parse_rational = [&](const std::string& s) {
    try {
      mpq_class q(s);
      q.canonicalize();
      return q;
    } catch (const std::invalid_argument&) {
      throw FormatError("not a rational: '" + s + "'");
    }
  };
  std::string body = text;
  unsigned long radicand = 0;
  for (const std::string_view marker : {std::string_view("·√"), std::string_view("*sqrt(")}) {
    const auto pos = body.find(marker);
    if (pos == std::string::npos) continue;
    std::string tail = body.substr(pos + marker.size());
    if (!tail.empty() && tail.back() == ')') tail.pop_back();
    try {
      radicand = std::stoul(tail);
    } catch (const std::exception&) {
      throw FormatError("bad radicand in '" + text + "'");
    }
    body = body.substr(0, pos);
    break;
  }
  if (radicand == 0) return Surd(parse_rational(body));
  // Optional rational part "a+b" or "a-b" before the radical coefficient.
  const auto split = body.find_first_of("+-", 1);
  if (split == std::string::npos) return Surd::root(radicand, parse_rational(body));
  std::string coeff = body.substr(split);
  if (coeff[0] == '+') coeff.erase(0, 1);
  return Surd(parse_rational(body.substr(0, split)), parse_rational(coeff), radicand);
}

}  // namespace lll
