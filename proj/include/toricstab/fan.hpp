#pragma once

// Complete fans in R^2 describing smooth compact toric surfaces: cyclically
// ordered primitive rays with strictly convex cones that wind once around
// the origin. Also angular sectors, the images of cones under iterated
// circle homeomorphisms, which may exceed angle pi.

#include <algorithm>
#include <optional>
#include <stdexcept>
#include <string>
#include <variant>
#include <vector>

#include "toricstab/bigint.hpp"
#include "toricstab/lattice.hpp"

namespace toricstab {

struct FanError : std::invalid_argument {
    using std::invalid_argument::invalid_argument;
};

// A strictly convex two-dimensional cone: 0 < angle(start -> end) < pi.
struct Cone {
    RationalRay start;
    RationalRay end;

    Cone(RationalRay s, RationalRay e) : start(std::move(s)), end(std::move(e)) {
        if (det2(start.gen(), end.gen()) <= 0)
            throw FanError("cone is not strictly convex: " + start.str() + " -> " + end.str());
    }

    BigInt determinant() const { return det2(start.gen(), end.gen()); }

    bool operator==(const Cone& o) const { return start == o.start && end == o.end; }

    std::string str() const { return "(" + start.str() + "," + end.str() + ")"; }
};

// start/end generators form a lattice basis; the smoothness condition.
inline bool is_regular(const Cone& c) { return c.determinant() == 1; }

class Fan {
  public:
    // Validates and normalizes a ray list into a fan. Throws FanError naming
    // the offending pair on duplicates, non-convex consecutive cones, or
    // winding != 1.
    static Fan validate(const std::vector<LatticeVector>& input) {
        std::vector<RationalRay> rays;
        rays.reserve(input.size());
        for (const auto& v : input) rays.emplace_back(v);

        for (std::size_t i = 0; i < rays.size(); ++i)
            for (std::size_t j = i + 1; j < rays.size(); ++j)
                if (rays[i] == rays[j]) throw FanError("duplicate ray " + rays[i].str());

        std::vector<LatticeVector> gens;
        gens.reserve(rays.size());
        for (const auto& r : rays) gens.push_back(r.gen());
        for (std::size_t j = 0; j < rays.size(); ++j) {
            const auto& cur = gens[j];
            const auto& nxt = gens[(j + 1) % gens.size()];
            if (det2(cur, nxt) <= 0)
                throw FanError("consecutive det <= 0 at pair " + rays[j].str() + ", " +
                               rays[(j + 1) % rays.size()].str());
        }
        if (rays.size() < 3) throw FanError("fan needs at least 3 rays");
        const int w = winding_number(gens);
        if (w != 1)
            throw FanError("rays wind " + std::to_string(w) + " times around the origin");
        return Fan(std::move(rays));
    }

    static Fan p2() { return validate({{1, 0}, {0, 1}, {-1, -1}}); }
    static Fan p1xp1() { return validate({{1, 0}, {0, 1}, {-1, 0}, {0, -1}}); }

    std::size_t size() const { return rays_.size(); }
    const RationalRay& ray(std::size_t i) const { return rays_[i % rays_.size()]; }
    const std::vector<RationalRay>& rays() const { return rays_; }

    Cone cone(std::size_t i) const { return Cone(ray(i), ray(i + 1)); }

    std::optional<std::size_t> index_of(const RationalRay& r) const {
        for (std::size_t i = 0; i < rays_.size(); ++i)
            if (rays_[i] == r) return i;
        return std::nullopt;
    }

    std::optional<std::size_t> index_of_cone(const Cone& c) const {
        for (std::size_t i = 0; i < rays_.size(); ++i)
            if (cone(i) == c) return i;
        return std::nullopt;
    }

    struct RayHit {
        std::size_t index;
    };
    struct ConeHit {
        std::size_t index;
    };
    using Location = std::variant<RayHit, ConeHit>;

    // Total: every ray either coincides with a fan ray or lies strictly
    // inside exactly one cone.
    Location locate(const RationalRay& r) const {
        for (std::size_t i = 0; i < rays_.size(); ++i)
            if (rays_[i] == r) return RayHit{i};
        for (std::size_t i = 0; i < rays_.size(); ++i)
            if (ccw_between(ray(i), r, ray(i + 1))) return ConeHit{i};
        throw std::logic_error("locate: fan does not cover the ray " + r.str());
    }

    // Fan with r inserted (no-op when r is already a ray).
    Fan with_ray(const RationalRay& r) const {
        if (index_of(r)) return *this;
        const auto loc = locate(r);
        const std::size_t i = std::get<ConeHit>(loc).index;
        std::vector<RationalRay> rays = rays_;
        rays.insert(rays.begin() + static_cast<std::ptrdiff_t>(i) + 1, r);
        return Fan(std::move(rays));
    }

    bool operator==(const Fan& o) const { return rays_ == o.rays_; }
    bool operator!=(const Fan& o) const { return !(*this == o); }

    std::string str() const {
        std::string s = "{";
        for (std::size_t i = 0; i < rays_.size(); ++i) {
            if (i) s += ", ";
            s += rays_[i].str();
        }
        return s + "}";
    }

  private:
    explicit Fan(std::vector<RationalRay> rays) : rays_(std::move(rays)) { canonicalize(); }

    // Rotate so the lexicographically smallest generator comes first; fan
    // equality is then plain syntactic equality.
    void canonicalize() {
        std::size_t best = 0;
        for (std::size_t i = 1; i < rays_.size(); ++i) {
            const auto& a = rays_[i].gen();
            const auto& b = rays_[best].gen();
            if (a.x < b.x || (a.x == b.x && a.y < b.y)) best = i;
        }
        std::rotate(rays_.begin(), rays_.begin() + static_cast<std::ptrdiff_t>(best),
                    rays_.end());
    }

    std::vector<RationalRay> rays_;
};

// Blowup of the double point of cone c: inserts primitive(start + end).
// For a regular cone both children are regular.
inline Fan blowup(const Fan& f, const Cone& c) {
    if (!f.index_of_cone(c)) throw FanError("blowup: not a cone of the fan: " + c.str());
    return f.with_ray(RationalRay(c.start.gen() + c.end.gen()));
}

// Hirzebruch-Jung resolution of a cone: the interior primitive rays whose
// insertion makes every sub-cone regular. These are the lattice points on
// the compact boundary of conv(cone \cap Z^2 \ {0}); we peel them off one at
// a time: the next boundary point after u is the unique w with
// det2(u, w) = 1 lying in the cone with minimal det2(w, end).
inline std::vector<RationalRay> regularize_cone(const Cone& c) {
    std::vector<RationalRay> out;
    LatticeVector u = c.start.gen();
    const LatticeVector v = c.end.gen();
    BigInt d = det2(u, v);
    while (d > 1) {
        // Solve det2(u, w0) = u.x*w0.y - u.y*w0.x = 1 via extended Euclid:
        // find s*u.x + t*u.y = 1 (u primitive) and take w0 = (-t, s).
        BigInt a = u.x, b = u.y;
        BigInt s0 = 1, s1 = 0, t0 = 0, t1 = 1;
        while (b != 0) {
            const BigInt quot = a / b;
            BigInt tmp = a - quot * b;
            a = b;
            b = tmp;
            tmp = s0 - quot * s1;
            s0 = s1;
            s1 = tmp;
            tmp = t0 - quot * t1;
            t0 = t1;
            t1 = tmp;
        }
        if (a < 0) {  // a = +-gcd = +-1
            s0 = -s0;
            t0 = -t0;
        }
        LatticeVector w0{-t0, s0};
        // Shift w0 along u to the residue with 0 < det2(w, v) < d.
        const BigInt r0 = det2(w0, v);
        BigInt rem = r0 % d;
        if (rem <= 0) rem += d;
        const BigInt k = (rem - r0) / d;
        const LatticeVector w = w0 + u.scaled(k);
        if (det2(u, w) != 1 || det2(w, v) <= 0 || det2(w, v) >= d)
            throw std::logic_error("regularize_cone: internal peeling invariant broken");
        out.emplace_back(w);
        u = w;
        d = det2(u, v);
    }
    // Post-condition: inserting the chain leaves only determinant-1 cones.
    LatticeVector prev = c.start.gen();
    for (const auto& r2 : out) {
        if (det2(prev, r2.gen()) != 1)
            throw std::logic_error("regularize_cone: chain determinant != 1");
        prev = r2.gen();
    }
    if (det2(prev, v) != 1 && !out.empty())
        throw std::logic_error("regularize_cone: chain does not reach the far ray");
    return out;
}

// Connected angular sector (start -> end counterclockwise) with an interior
// witness ray. Images of cones under iterated homeomorphisms can exceed pi,
// so the witness is what disambiguates orientation when mapping a sector.
struct Sector {
    RationalRay start;
    RationalRay end;
    RationalRay witness;

    Sector(RationalRay s, RationalRay e, RationalRay w)
        : start(std::move(s)), end(std::move(e)), witness(std::move(w)) {
        if (start == end) throw std::invalid_argument("sector endpoints coincide");
        if (!ccw_between(start, witness, end))
            throw std::invalid_argument("sector witness " + witness.str() +
                                        " not inside arc " + start.str() + " -> " + end.str());
    }

    bool operator==(const Sector& o) const { return start == o.start && end == o.end; }

    std::string str() const {
        return "[" + start.str() + " ~" + witness.str() + "~ " + end.str() + "]";
    }
};

inline bool sector_contains_ray(const Sector& s, const RationalRay& r) {
    return ccw_between(s.start, r, s.end);
}

// Sector arc contained in the (closed) cone arc.
inline bool sector_within_cone(const Sector& s, const Cone& c) {
    return ccw_within_closed(c.start, s.start, c.end) &&
           ccw_within_closed(s.start, s.end, c.end);
}

// Cone arc contained in the (closed) sector arc.
inline bool cone_within_sector(const Cone& c, const Sector& s) {
    return ccw_within_closed(s.start, c.start, s.end) &&
           ccw_within_closed(c.start, c.end, s.end);
}

}  // namespace toricstab
