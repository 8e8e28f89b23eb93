#pragma once

// Exact two-dimensional integer linear algebra: lattice vectors, primitive
// rays, 2x2 integer matrices, and the cyclic-order predicates every other
// module is built on. All comparisons are decided by signs of exact integer
// expressions; no floating point enters here.

#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

#include "toricstab/bigint.hpp"

namespace toricstab {

struct LatticeVector {
    BigInt x{0};
    BigInt y{0};

    LatticeVector() = default;
    LatticeVector(BigInt px, BigInt py) : x(std::move(px)), y(std::move(py)) {}
    LatticeVector(long px, long py) : x(px), y(py) {}

    bool is_zero() const { return x == 0 && y == 0; }

    LatticeVector operator+(const LatticeVector& o) const { return {x + o.x, y + o.y}; }
    LatticeVector operator-(const LatticeVector& o) const { return {x - o.x, y - o.y}; }
    LatticeVector operator-() const { return {-x, -y}; }
    LatticeVector scaled(const BigInt& k) const { return {x * k, y * k}; }

    bool operator==(const LatticeVector& o) const { return x == o.x && y == o.y; }
    bool operator!=(const LatticeVector& o) const { return !(*this == o); }
};

inline BigInt dot(const LatticeVector& u, const LatticeVector& v) {
    return u.x * v.x + u.y * v.y;
}

// u.x*v.y - u.y*v.x; positive iff v lies counterclockwise of u by less than pi.
inline BigInt det2(const LatticeVector& u, const LatticeVector& v) {
    return u.x * v.y - u.y * v.x;
}

// Rotation by +90 degrees.
inline LatticeVector perp(const LatticeVector& v) { return {-v.y, v.x}; }

// gcd of absolute coordinates; the lattice index of v on its ray.
inline BigInt content(const LatticeVector& v) {
    if (v.is_zero()) throw std::invalid_argument("zero vector has no content");
    return gcd(abs(v.x), abs(v.y));
}

// A directed ray through the origin, stored as its primitive generator.
// u and -u are distinct rays.
class RationalRay {
  public:
    explicit RationalRay(const LatticeVector& v) {
        if (v.is_zero()) throw std::invalid_argument("zero vector has no direction");
        BigInt c = content(v);
        gen_ = LatticeVector{v.x / c, v.y / c};
    }
    RationalRay(long x, long y) : RationalRay(LatticeVector{x, y}) {}

    const LatticeVector& gen() const { return gen_; }

    bool operator==(const RationalRay& o) const { return gen_ == o.gen_; }
    bool operator!=(const RationalRay& o) const { return !(*this == o); }

    RationalRay opposite() const { return RationalRay(-gen_); }

    std::string str() const { return "(" + to_string(gen_.x) + "," + to_string(gen_.y) + ")"; }

  private:
    LatticeVector gen_;
};

inline RationalRay primitive(const LatticeVector& v) { return RationalRay(v); }

inline bool same_ray(const LatticeVector& u, const LatticeVector& v) {
    return det2(u, v) == 0 && dot(u, v) > 0;
}

// 0 while the angle is in [0, pi), 1 in [pi, 2pi). Splitting the circle this
// way gives a strict total order on ray directions.
inline int half_plane(const LatticeVector& v) {
    if (v.is_zero()) throw std::invalid_argument("zero vector has no direction");
    return (v.y > 0 || (v.y == 0 && v.x > 0)) ? 0 : 1;
}

// Strict "angle(u) < angle(v)" with angles measured in [0, 2pi).
inline bool angle_less(const LatticeVector& u, const LatticeVector& v) {
    const int hu = half_plane(u), hv = half_plane(v);
    if (hu != hv) return hu < hv;
    return det2(u, v) > 0;
}

// Position of u relative to a, walking counterclockwise from a:
// 0 = same ray, 1 = strictly within the first half turn, 2 = opposite ray,
// 3 = strictly within the second half turn.
inline int ccw_position_class(const LatticeVector& a, const LatticeVector& u) {
    const BigInt d = det2(a, u);
    if (d > 0) return 1;
    if (d < 0) return 3;
    return dot(a, u) > 0 ? 0 : 2;
}

// True iff x lies strictly inside the counterclockwise arc from a to b.
// The arc may exceed pi. x equal to a or b yields false.
inline bool ccw_between(const LatticeVector& a, const LatticeVector& x, const LatticeVector& b) {
    const int px = ccw_position_class(a, x);
    const int pb = ccw_position_class(a, b);
    if (pb == 0) throw std::invalid_argument("ccw_between: arc endpoints coincide");
    if (px == 0) return false;
    if (px != pb) return px < pb;
    if (px == 2) return false;  // x and b both opposite a, hence equal rays
    return det2(x, b) > 0;
}

inline bool ccw_between(const RationalRay& a, const RationalRay& x, const RationalRay& b) {
    return ccw_between(a.gen(), x.gen(), b.gen());
}

// Closed variant: endpoints count as inside. A degenerate arc (b on the ray
// of a) contains only its endpoint.
inline bool ccw_within_closed(const LatticeVector& a, const LatticeVector& x,
                              const LatticeVector& b) {
    if (same_ray(a, x) || same_ray(x, b)) return true;
    if (same_ray(a, b)) return false;
    return ccw_between(a, x, b);
}

inline bool ccw_within_closed(const RationalRay& a, const RationalRay& x, const RationalRay& b) {
    return ccw_within_closed(a.gen(), x.gen(), b.gen());
}

// Number of times the cyclic sequence of rays winds counterclockwise around
// the origin. Consecutive entries must advance by an angle in (0, pi).
inline int winding_number(const std::vector<LatticeVector>& rays) {
    if (rays.size() < 3) throw std::invalid_argument("winding_number: need at least 3 rays");
    const LatticeVector ref{1, 0};
    int crossings = 0;
    for (std::size_t j = 0; j < rays.size(); ++j) {
        const LatticeVector& cur = rays[j];
        const LatticeVector& nxt = rays[(j + 1) % rays.size()];
        if (det2(cur, nxt) <= 0)
            throw std::invalid_argument("winding_number: consecutive rays do not advance ccw");
        // Count arcs [cur, nxt) containing the reference direction.
        if (same_ray(cur, ref) || ccw_between(cur, ref, nxt)) ++crossings;
    }
    return crossings;
}

// Row-major exact 2x2 integer matrix.
struct IntMatrix {
    BigInt a{0}, b{0}, c{0}, d{0};

    IntMatrix() = default;
    IntMatrix(BigInt pa, BigInt pb, BigInt pc, BigInt pd)
        : a(std::move(pa)), b(std::move(pb)), c(std::move(pc)), d(std::move(pd)) {}
    IntMatrix(long pa, long pb, long pc, long pd) : a(pa), b(pb), c(pc), d(pd) {}

    static IntMatrix identity() { return {1, 0, 0, 1}; }

    BigInt det() const { return a * d - b * c; }
    BigInt trace() const { return a + d; }

    LatticeVector apply(const LatticeVector& v) const {
        return {a * v.x + b * v.y, c * v.x + d * v.y};
    }

    IntMatrix operator*(const IntMatrix& o) const {
        return {a * o.a + b * o.c, a * o.b + b * o.d, c * o.a + d * o.c, c * o.b + d * o.d};
    }

    bool operator==(const IntMatrix& o) const {
        return a == o.a && b == o.b && c == o.c && d == o.d;
    }
    bool operator!=(const IntMatrix& o) const { return !(*this == o); }

    // det * inverse; integral companion for exact preimage computations.
    IntMatrix adjugate() const { return {d, -b, -c, a}; }

    bool is_scalar() const { return b == 0 && c == 0 && a == d; }

    IntMatrix pow(unsigned n) const {
        IntMatrix acc = identity();
        IntMatrix base = *this;
        while (n > 0) {
            if (n & 1u) acc = acc * base;
            base = base * base;
            n >>= 1u;
        }
        return acc;
    }

    std::string str() const {
        return "[[" + to_string(a) + "," + to_string(b) + "],[" + to_string(c) + "," +
               to_string(d) + "]]";
    }
};

}  // namespace toricstab
