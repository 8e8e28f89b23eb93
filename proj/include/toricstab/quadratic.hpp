#pragma once

// Real quadratic numbers (p + q*sqrt(D))/r with exact sign and comparison,
// plus directions in the plane whose slope may be such a surd. These house
// eigenvalues and eigen-directions of integer matrices, which is all the
// irrationality the library ever needs.

#include <optional>
#include <stdexcept>
#include <string>
#include <variant>
#include <vector>

#include "toricstab/bigint.hpp"
#include "toricstab/lattice.hpp"

namespace toricstab {

namespace detail {

// sign(p + q*sqrt(D)), D >= 0, by pure integer arithmetic.
inline int two_term_sign(const BigInt& p, const BigInt& q, const BigInt& D) {
    if (q == 0 || D == 0) return sign(p);
    if (p == 0) return sign(q);
    const int sp = sign(p), sq = sign(q);
    if (sp == sq) return sp;
    // Opposite signs: compare p^2 against q^2 D; the larger magnitude wins.
    const BigInt lhs = p * p, rhs = q * q * D;
    if (lhs == rhs) return 0;
    return (lhs > rhs) ? sp : sq;
}

// sign(A + B*sqrt(D1) + C*sqrt(D2)). Needed to compare surds from
// different quadratic fields.
inline int three_term_sign(const BigInt& A, const BigInt& B, const BigInt& D1, const BigInt& C,
                           const BigInt& D2) {
    const int s1 = two_term_sign(A, B, D1);
    const int s2 = (D2 == 0) ? 0 : sign(C);
    if (s2 == 0) return s1;
    if (s1 == 0) return s2;
    if (s1 == s2) return s1;
    // Compare (A + B*sqrt(D1))^2 against C^2 D2.
    const BigInt P = A * A + B * B * D1 - C * C * D2;
    const BigInt Q = 2 * A * B;
    const int t = two_term_sign(P, Q, D1);
    if (t == 0) return 0;
    return (t > 0) ? s1 : s2;
}

// Pull square factors out of D by trial division. Factors above the trial
// bound stay inside D; all comparisons remain exact as long as the
// representation is used consistently, so there is no factorization
// dependency here.
inline BigInt extract_square_part(BigInt& D) {
    BigInt out = 1;
    if (D <= 1) return out;
    for (BigInt f = 2; f <= 1'000'000 && f * f <= D; ++f) {
        const BigInt f2 = f * f;
        while (D % f2 == 0) {
            D /= f2;
            out *= f;
        }
    }
    return out;
}

}  // namespace detail

// Value (p + q*sqrt(D))/r with r > 0 and D >= 0; D = 0 forces a rational.
class QuadraticNumber {
  public:
    QuadraticNumber() : p_(0), q_(0), D_(0), r_(1) {}

    static QuadraticNumber rational(BigInt p, BigInt r = 1) {
        return QuadraticNumber(std::move(p), 0, 0, std::move(r));
    }

    static QuadraticNumber surd(BigInt p, BigInt q, BigInt D, BigInt r = 1) {
        return QuadraticNumber(std::move(p), std::move(q), std::move(D), std::move(r));
    }

    QuadraticNumber(BigInt p, BigInt q, BigInt D, BigInt r)
        : p_(std::move(p)), q_(std::move(q)), D_(std::move(D)), r_(std::move(r)) {
        if (D_ < 0) throw std::invalid_argument("QuadraticNumber: negative discriminant");
        if (r_ == 0) throw std::invalid_argument("QuadraticNumber: zero denominator");
        normalize();
    }

    const BigInt& p() const { return p_; }
    const BigInt& q() const { return q_; }
    const BigInt& D() const { return D_; }
    const BigInt& r() const { return r_; }

    bool is_rational() const { return q_ == 0; }
    bool is_zero() const { return p_ == 0 && q_ == 0; }

    int sign() const { return detail::two_term_sign(p_, q_, D_); }

    static int compare(const QuadraticNumber& a, const QuadraticNumber& b) {
        // sign of a - b over the common denominator.
        return detail::three_term_sign(a.p_ * b.r_ - b.p_ * a.r_, a.q_ * b.r_, a.D_,
                                       -b.q_ * a.r_, b.D_);
    }

    bool operator==(const QuadraticNumber& o) const { return compare(*this, o) == 0; }
    bool operator!=(const QuadraticNumber& o) const { return compare(*this, o) != 0; }
    bool operator<(const QuadraticNumber& o) const { return compare(*this, o) < 0; }
    bool operator>(const QuadraticNumber& o) const { return compare(*this, o) > 0; }
    bool operator<=(const QuadraticNumber& o) const { return compare(*this, o) <= 0; }
    bool operator>=(const QuadraticNumber& o) const { return compare(*this, o) >= 0; }

    QuadraticNumber operator-() const { return QuadraticNumber(-p_, -q_, D_, r_); }

    QuadraticNumber abs() const { return sign() < 0 ? -*this : *this; }

    // Addition/subtraction require compatible fields (same D, or one side
    // rational); that is all the eigenvalue bookkeeping needs.
    QuadraticNumber operator+(const QuadraticNumber& o) const {
        const BigInt D = merged_disc(o);
        return QuadraticNumber(p_ * o.r_ + o.p_ * r_, q_ * o.r_ + o.q_ * r_, D, r_ * o.r_);
    }
    QuadraticNumber operator-(const QuadraticNumber& o) const { return *this + (-o); }

    QuadraticNumber scaled(const BigInt& k) const { return QuadraticNumber(p_ * k, q_ * k, D_, r_); }

    double to_double() const {
        double val = toricstab::to_double(p_);
        if (q_ != 0) val += toricstab::to_double(q_) * std::sqrt(toricstab::to_double(D_));
        return val / toricstab::to_double(r_);
    }

    std::string str() const {
        if (is_rational()) {
            if (r_ == 1) return to_string(p_);
            return to_string(p_) + "/" + to_string(r_);
        }
        std::string surd = (q_ == 1 ? "" : (q_ == -1 ? "-" : to_string(q_) + "*")) + "sqrt(" +
                           to_string(D_) + ")";
        std::string num = (p_ == 0) ? surd : to_string(p_) + (q_ > 0 ? "+" : "") + surd;
        if (r_ == 1) return (p_ == 0) ? num : "(" + num + ")";
        return "(" + num + ")/" + to_string(r_);
    }

  private:
    BigInt merged_disc(const QuadraticNumber& o) const {
        if (q_ == 0) return o.D_;
        if (o.q_ == 0) return D_;
        if (D_ != o.D_)
            throw std::invalid_argument("QuadraticNumber: mixed-field arithmetic not supported");
        return D_;
    }

    void normalize() {
        if (r_ < 0) {
            r_ = -r_;
            p_ = -p_;
            q_ = -q_;
        }
        if (D_ == 0) q_ = 0;
        if (q_ == 0) {
            D_ = 0;
        } else {
            const BigInt square = detail::extract_square_part(D_);
            q_ *= square;
            if (D_ == 1) {  // the radical collapsed
                p_ += q_;
                q_ = 0;
                D_ = 0;
            }
        }
        BigInt g = gcd(gcd(toricstab::abs(p_), toricstab::abs(q_)), r_);
        if (g > 1) {
            p_ /= g;
            q_ /= g;
            r_ /= g;
        }
    }

    BigInt p_, q_, D_, r_;
};

// A plane direction with components in a real quadratic field; used for
// irrational eigen-directions. Sides against rational rays are decided
// exactly through quadratic signs.
struct QuadVec {
    QuadraticNumber x, y;

    int sign_x() const { return x.sign(); }
    int sign_y() const { return y.sign(); }

    QuadVec negated() const { return {-x, -y}; }

    // det2(u, *this) for integer u, as an exact sign.
    int det_sign_after(const LatticeVector& u) const {
        return (x.scaled(-u.y) + y.scaled(u.x)).sign();
    }

    double approx_x() const { return x.to_double(); }
    double approx_y() const { return y.to_double(); }
};

// Either a rational ray or an irrational quadratic direction.
class Direction {
  public:
    explicit Direction(RationalRay r) : rep_(std::move(r)) {}
    explicit Direction(QuadVec v) : rep_(std::move(v)) {}

    bool is_rational() const { return std::holds_alternative<RationalRay>(rep_); }
    const RationalRay& ray() const { return std::get<RationalRay>(rep_); }
    const QuadVec& surd() const { return std::get<QuadVec>(rep_); }

    // sign of det2(u, direction): +1 when the direction lies counterclockwise
    // of u within half a turn.
    int side_of(const RationalRay& u) const {
        if (is_rational()) return sign(det2(u.gen(), ray().gen()));
        return surd().det_sign_after(u.gen());
    }

    // Strict containment in a convex cone (angle < pi) bounded by rational rays.
    bool strictly_inside(const RationalRay& start, const RationalRay& end) const {
        return side_of(start) > 0 && [&] {
            if (is_rational()) return sign(det2(ray().gen(), end.gen())) > 0;
            // det2(dir, end) = x*end.y - y*end.x
            const QuadVec& v = surd();
            return (v.x.scaled(end.gen().y) - v.y.scaled(end.gen().x)).sign() > 0;
        }();
    }

    double approx_x() const { return is_rational() ? to_double(ray().gen().x) : surd().approx_x(); }
    double approx_y() const { return is_rational() ? to_double(ray().gen().y) : surd().approx_y(); }

    std::string str() const {
        if (is_rational()) return ray().str();
        return "(" + surd().x.str() + "," + surd().y.str() + ")";
    }

  private:
    std::variant<RationalRay, QuadVec> rep_;
};

struct EigenRay {
    Direction direction;
    QuadraticNumber eigenvalue;
};

// Eigen-direction report for a nonsingular integer matrix.
//
// Fixed rays of the induced circle map are exactly the eigen-directions with
// positive eigenvalue; negative eigenvalues send a ray to its opposite, so
// those are period-2 rays and reported separately. Each eigen line
// contributes two opposite rays. A positive scalar matrix fixes every ray.
struct EigenDirections {
    enum class ScalarKind { none, positive, negative };

    ScalarKind scalar = ScalarKind::none;
    QuadraticNumber scalar_value;          // set when scalar != none
    std::vector<EigenRay> fixed;           // eigenvalue > 0
    std::vector<EigenRay> period_two;      // eigenvalue < 0
    bool jordan_block = false;             // repeated eigenvalue, non-diagonalizable
};

namespace detail {

// Integer eigenvector for an integer eigenvalue lam of M (M != lam*I).
inline LatticeVector integer_eigenvector(const IntMatrix& M, const BigInt& lam) {
    if (M.b != 0) return {M.b, lam - M.a};
    if (M.c != 0) return {lam - M.d, M.c};
    // Diagonal matrix: eigenvalues are the diagonal entries.
    if (M.a == lam) return {1, 0};
    return {0, 1};
}

// Eigenvector with components in Q(sqrt(disc)) for lam = (tr + s*sqrt(disc))/2.
inline QuadVec surd_eigenvector(const IntMatrix& M, const BigInt& disc, int s) {
    const BigInt tr = M.trace();
    if (M.b != 0) {
        // (2b, (tr - 2a) + s*sqrt(disc))
        return {QuadraticNumber::rational(2 * M.b),
                QuadraticNumber::surd(tr - 2 * M.a, s, disc)};
    }
    // b == 0 and irrational spectrum forces c != 0.
    return {QuadraticNumber::surd(tr - 2 * M.d, s, disc), QuadraticNumber::rational(2 * M.c)};
}

}  // namespace detail

inline EigenDirections eigen_directions(const IntMatrix& M) {
    if (M.det() == 0) throw std::invalid_argument("eigen_directions: singular matrix");
    EigenDirections out;

    if (M.is_scalar()) {
        out.scalar = M.a > 0 ? EigenDirections::ScalarKind::positive
                             : EigenDirections::ScalarKind::negative;
        out.scalar_value = QuadraticNumber::rational(M.a);
        return out;
    }

    const BigInt tr = M.trace();
    const BigInt disc = tr * tr - 4 * M.det();
    if (disc < 0) return out;  // complex spectrum, no real eigen-directions

    auto push = [&out](const LatticeVector& v, const QuadraticNumber& lam) {
        RationalRay ray(v);
        auto& bucket = lam.sign() > 0 ? out.fixed : out.period_two;
        bucket.push_back({Direction(ray), lam});
        bucket.push_back({Direction(ray.opposite()), lam});
    };
    auto push_surd = [&out](const QuadVec& v, const QuadraticNumber& lam) {
        auto& bucket = lam.sign() > 0 ? out.fixed : out.period_two;
        bucket.push_back({Direction(v), lam});
        bucket.push_back({Direction(v.negated()), lam});
    };

    if (disc == 0) {
        // Repeated eigenvalue tr/2, non-scalar: a single Jordan block with a
        // rational eigen-direction.
        out.jordan_block = true;
        const QuadraticNumber lam = QuadraticNumber::rational(tr, 2);
        // Clear the half-integer: v = (2b, tr - 2a) or the c-based analogue.
        LatticeVector v =
            (M.b != 0) ? LatticeVector{2 * M.b, tr - 2 * M.a}
                       : (M.c != 0 ? LatticeVector{tr - 2 * M.d, 2 * M.c} : LatticeVector{1, 0});
        push(v, lam);
        return out;
    }

    BigInt root;
    if (is_perfect_square(disc, &root)) {
        // Integer eigenvalues (disc = tr^2 mod 4 makes tr and root share parity).
        for (int s : {+1, -1}) {
            const BigInt lam = (tr + s * root) / 2;
            push(detail::integer_eigenvector(M, lam), QuadraticNumber::rational(lam));
        }
    } else {
        for (int s : {+1, -1}) {
            push_surd(detail::surd_eigenvector(M, disc, s),
                      QuadraticNumber::surd(tr, s, disc, 2));
        }
    }
    return out;
}

}  // namespace toricstab
