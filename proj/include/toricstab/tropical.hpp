#pragma once

// Piecewise-linear integral maps on R^2 induced by rational maps preserving
// the toric two-form: construction from polynomial supports (tropicalization)
// and the PL-map algebra (evaluation, composition, iteration, orientation,
// homeomorphism test). A map is a linearity fan plus one integer matrix per
// cone, continuous across shared rays and integral on Z^2 by construction.

#include <algorithm>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include "toricstab/bigint.hpp"
#include "toricstab/fan.hpp"
#include "toricstab/lattice.hpp"

namespace toricstab {

// Finite set of exponent vectors of a polynomial (non-negative coordinates,
// duplicates collapsed).
class MonomialSupport {
  public:
    explicit MonomialSupport(std::vector<LatticeVector> exponents) {
        if (exponents.empty()) throw std::invalid_argument("empty monomial support");
        for (const auto& e : exponents)
            if (e.x < 0 || e.y < 0)
                throw std::invalid_argument("monomial support has a negative exponent");
        std::sort(exponents.begin(), exponents.end(), [](const auto& a, const auto& b) {
            return a.x < b.x || (a.x == b.x && a.y < b.y);
        });
        exponents.erase(std::unique(exponents.begin(), exponents.end()), exponents.end());
        exponents_ = std::move(exponents);
    }

    const std::vector<LatticeVector>& exponents() const { return exponents_; }

    bool operator==(const MonomialSupport& o) const { return exponents_ == o.exponents_; }

  private:
    std::vector<LatticeVector> exponents_;
};

// min over the support of <exponent, u>; the valuation a polynomial picks up
// along the one-parameter subgroup of direction u.
inline BigInt nu_eval(const MonomialSupport& s, const LatticeVector& u) {
    BigInt best;
    bool first = true;
    for (const auto& e : s.exponents()) {
        const BigInt val = dot(e, u);
        if (first || val < best) {
            best = val;
            first = false;
        }
    }
    return best;
}

// Supports of the three polynomials of f = (P1/P3, P2/P3), plus a flag
// recording whether the coefficients are assumed generic. The tropical map
// equals the induced map on polar primes under that genericity assumption,
// so the flag is carried verbatim into every downstream report.
struct RationalMapData {
    MonomialSupport p1, p2, p3;
    bool generic_coefficients = true;
};

class PLIntegralMap {
  public:
    PLIntegralMap(Fan fan, std::vector<IntMatrix> pieces, bool generic = true)
        : fan_(std::move(fan)), pieces_(std::move(pieces)), generic_(generic) {
        if (pieces_.size() != fan_.size())
            throw std::invalid_argument("PLIntegralMap: one matrix per cone required");
        degenerate_ = false;
        for (const auto& m : pieces_)
            if (m.det() == 0) degenerate_ = true;
        verify_continuity();
    }

    const Fan& domain_fan() const { return fan_; }
    const IntMatrix& piece(std::size_t cone_index) const {
        return pieces_[cone_index % pieces_.size()];
    }
    const std::vector<IntMatrix>& pieces() const { return pieces_; }
    bool generic_coefficients() const { return generic_; }
    bool has_degenerate_piece() const { return degenerate_; }

    bool is_linear() const {
        for (const auto& m : pieces_)
            if (m != pieces_.front()) return false;
        return true;
    }

    // All pieces one positive scalar matrix: the identity on rays.
    bool is_identity_on_rays() const {
        for (const auto& m : pieces_)
            if (!m.is_scalar() || m.a <= 0) return false;
        return true;
    }

    const IntMatrix& piece_at(const RationalRay& r) const {
        const auto loc = fan_.locate(r);
        if (std::holds_alternative<Fan::RayHit>(loc)) {
            // Both adjacent pieces agree on a fan ray; use the one that
            // starts there.
            return pieces_[std::get<Fan::RayHit>(loc).index];
        }
        return pieces_[std::get<Fan::ConeHit>(loc).index];
    }

    LatticeVector apply(const LatticeVector& u) const {
        if (u.is_zero()) return u;
        const LatticeVector img = piece_at(RationalRay(u)).apply(u);
        guard_magnitude(img.x);
        guard_magnitude(img.y);
        return img;
    }

    struct RayImage {
        RationalRay ray;
        BigInt content;  // lattice index of the raw image vector
    };

    RayImage evaluate_ray(const RationalRay& r) const {
        const LatticeVector img = piece_at(r).apply(r.gen());
        if (img.is_zero())
            throw std::domain_error("ray collapsed: " + r.str() +
                                    " maps to the origin (degenerate piece)");
        guard_magnitude(img.x);
        guard_magnitude(img.y);
        return {RationalRay(img), content(img)};
    }

    // Image of a cone as a sector; the witness of the result is the image of
    // the cone's interior witness, which settles orientation.
    Sector map_cone(const Cone& c) const {
        const RationalRay w(c.start.gen() + c.end.gen());
        return oriented_sector(evaluate_ray(c.start).ray, evaluate_ray(c.end).ray,
                               evaluate_ray(w).ray);
    }

    Sector map_sector(const Sector& s) const {
        return oriented_sector(evaluate_ray(s.start).ray, evaluate_ray(s.end).ray,
                               evaluate_ray(s.witness).ray);
    }

  private:
    static Sector oriented_sector(const RationalRay& a, const RationalRay& b,
                                  const RationalRay& w) {
        if (ccw_between(a, w, b)) return Sector(a, b, w);
        return Sector(b, a, w);
    }

    void verify_continuity() const {
        const std::size_t n = fan_.size();
        for (std::size_t j = 0; j < n; ++j) {
            const IntMatrix& before = pieces_[(j + n - 1) % n];
            const IntMatrix& after = pieces_[j];
            // Collapsed pieces of a flagged degenerate map are exempt; the
            // homeomorphism test rejects such maps before they are used.
            if (degenerate_ && (before.det() == 0 || after.det() == 0)) continue;
            const auto& shared = fan_.ray(j).gen();
            if (before.apply(shared) != after.apply(shared))
                throw std::logic_error("PL map discontinuous across ray " + fan_.ray(j).str());
        }
    }

    Fan fan_;
    std::vector<IntMatrix> pieces_;
    bool generic_;
    bool degenerate_;
};

namespace detail {

// Angular sort + dedupe, then patch the ray set into a valid complete fan by
// inserting fillers into any gap of angle >= pi. An empty collection falls
// back to the fan of P^2.
inline Fan complete_ray_set(std::vector<LatticeVector> gens) {
    std::vector<LatticeVector> rays;
    for (const auto& g : gens)
        if (!g.is_zero()) rays.push_back(RationalRay(g).gen());
    std::sort(rays.begin(), rays.end(),
              [](const LatticeVector& a, const LatticeVector& b) { return angle_less(a, b); });
    rays.erase(std::unique(rays.begin(), rays.end()), rays.end());

    if (rays.empty()) return Fan::p2();
    if (rays.size() == 1) rays.push_back(-rays.front());

    // Fix gaps until every consecutive pair advances by less than pi.
    bool changed = true;
    while (changed) {
        changed = false;
        for (std::size_t j = 0; j < rays.size(); ++j) {
            const LatticeVector cur = rays[j];
            const LatticeVector nxt = rays[(j + 1) % rays.size()];
            const BigInt d = det2(cur, nxt);
            if (d > 0) continue;
            // Gap of exactly pi gets the perpendicular, a reflex gap gets
            // -(cur+nxt); both are strictly inside the gap.
            const LatticeVector fill =
                (d == 0) ? perp(cur) : RationalRay(-(cur + nxt)).gen();
            rays.insert(rays.begin() + static_cast<std::ptrdiff_t>(j) + 1, fill);
            changed = true;
            break;
        }
    }
    return Fan::validate(rays);
}

// Unique minimizing exponent of a support over the open cone with interior
// point w. Complete break-ray collection guarantees uniqueness.
inline LatticeVector active_exponent(const MonomialSupport& s, const LatticeVector& w) {
    const BigInt best = nu_eval(s, w);
    std::optional<LatticeVector> found;
    for (const auto& e : s.exponents()) {
        if (dot(e, w) == best) {
            if (found) throw std::logic_error("tie in active exponent inside an open cone");
            found = e;
        }
    }
    return *found;
}

}  // namespace detail

// The tropicalization u -> (nu(p1,u) - nu(p3,u), nu(p2,u) - nu(p3,u)) as a
// PLIntegralMap. The linearity fan collects, for each support, the
// perpendiculars of all pairwise exponent differences (both signs): every
// ray where some min changes regime is among them, so each open cone has a
// single active exponent per support and the piece matrix is read off
// directly.
inline PLIntegralMap tropicalize(const RationalMapData& d) {
    std::vector<LatticeVector> candidates;
    for (const MonomialSupport* s : {&d.p1, &d.p2, &d.p3}) {
        const auto& exps = s->exponents();
        for (std::size_t i = 0; i < exps.size(); ++i)
            for (std::size_t j = i + 1; j < exps.size(); ++j) {
                const LatticeVector diff = exps[i] - exps[j];
                candidates.push_back(perp(diff));
                candidates.push_back(-perp(diff));
            }
    }
    const Fan fan = detail::complete_ray_set(std::move(candidates));

    std::vector<IntMatrix> pieces;
    pieces.reserve(fan.size());
    for (std::size_t i = 0; i < fan.size(); ++i) {
        const Cone c = fan.cone(i);
        const LatticeVector w = c.start.gen() + c.end.gen();
        const LatticeVector e1 = detail::active_exponent(d.p1, w);
        const LatticeVector e2 = detail::active_exponent(d.p2, w);
        const LatticeVector e3 = detail::active_exponent(d.p3, w);
        pieces.emplace_back(e1.x - e3.x, e1.y - e3.y, e2.x - e3.x, e2.y - e3.y);
    }
    return PLIntegralMap(fan, std::move(pieces), d.generic_coefficients);
}

// Globally linear map of a monomial (x,y) -> (x^a y^b, x^c y^d).
inline PLIntegralMap from_monomial(const IntMatrix& A) {
    if (A.det() == 0) throw std::invalid_argument("from_monomial: singular matrix");
    const Fan fan = Fan::p2();
    return PLIntegralMap(fan, std::vector<IntMatrix>(fan.size(), A), true);
}

// Composite T o S with the exact refined linearity fan: S's fan plus the
// S-preimages of T's linearity rays, computed piece by piece through the
// adjugate.
inline PLIntegralMap compose(const PLIntegralMap& T, const PLIntegralMap& S) {
    std::vector<LatticeVector> rays;
    for (const auto& r : S.domain_fan().rays()) rays.push_back(r.gen());

    for (std::size_t i = 0; i < S.domain_fan().size(); ++i) {
        const Cone c = S.domain_fan().cone(i);
        const IntMatrix& m = S.piece(i);
        const BigInt det = m.det();
        if (det == 0) continue;  // degenerate piece: nothing to refine
        for (const auto& t : T.domain_fan().rays()) {
            LatticeVector pre = m.adjugate().apply(t.gen());
            if (det < 0) pre = -pre;  // m * pre = det * t flips the ray for det < 0
            if (pre.is_zero()) continue;
            if (ccw_between(c.start.gen(), RationalRay(pre).gen(), c.end.gen()))
                rays.push_back(pre);
        }
    }
    const Fan fan = detail::complete_ray_set(std::move(rays));

    std::vector<IntMatrix> pieces;
    pieces.reserve(fan.size());
    for (std::size_t i = 0; i < fan.size(); ++i) {
        const Cone c = fan.cone(i);
        const LatticeVector w = c.start.gen() + c.end.gen();
        const IntMatrix& ms = S.piece_at(RationalRay(w));
        const LatticeVector img = ms.apply(w);
        if (img.is_zero()) {
            pieces.emplace_back(0, 0, 0, 0);  // collapsed piece, stays flagged
            continue;
        }
        const IntMatrix& mt = T.piece_at(RationalRay(img));
        pieces.push_back(mt * ms);
    }
    return PLIntegralMap(fan, std::move(pieces),
                         T.generic_coefficients() && S.generic_coefficients());
}

inline PLIntegralMap iterate(const PLIntegralMap& T, unsigned n) {
    if (n < 1) throw std::invalid_argument("iterate: n must be >= 1");
    PLIntegralMap acc = T;
    for (unsigned k = 1; k < n; ++k) acc = compose(T, acc);
    return acc;
}

// Equality as maps on rays: identical action on every ray of both domain
// fans plus an interior witness per merged cone. Piece decompositions are
// not unique; actions are.
inline bool ray_equal(const PLIntegralMap& A, const PLIntegralMap& B) {
    std::vector<LatticeVector> gens;
    for (const auto& r : A.domain_fan().rays()) gens.push_back(r.gen());
    for (const auto& r : B.domain_fan().rays()) gens.push_back(r.gen());
    const Fan merged = detail::complete_ray_set(std::move(gens));
    auto same_image = [&](const RationalRay& r) {
        return A.evaluate_ray(r).ray == B.evaluate_ray(r).ray;
    };
    for (std::size_t i = 0; i < merged.size(); ++i) {
        if (!same_image(merged.ray(i))) return false;
        const Cone c = merged.cone(i);
        if (!same_image(RationalRay(c.start.gen() + c.end.gen()))) return false;
    }
    return true;
}

enum class Orientation { preserving, reversing };

struct HomeoVerdict {
    bool accepted = false;
    Orientation orientation = Orientation::preserving;
    std::string diagnostic;
};

// Accepts iff every piece is nonsingular, all determinants share one sign,
// and the images of the fan rays wind exactly once around the origin. The
// winding test is the global injectivity check on the circle; winding > 1
// would be the lambda2/|delta| > 1 covering case, which is rejected.
inline HomeoVerdict is_homeomorphism(const PLIntegralMap& T) {
    HomeoVerdict v;
    const std::size_t n = T.domain_fan().size();
    int orient = 0;
    for (std::size_t i = 0; i < n; ++i) {
        const BigInt det = T.piece(i).det();
        if (det == 0) {
            v.diagnostic = "singular piece on cone " + T.domain_fan().cone(i).str();
            return v;
        }
        const int s = det > 0 ? 1 : -1;
        if (orient == 0) orient = s;
        if (orient != s) {
            v.diagnostic = "mixed determinant signs";
            return v;
        }
    }
    std::vector<LatticeVector> images;
    images.reserve(n);
    for (std::size_t i = 0; i < n; ++i)
        images.push_back(T.evaluate_ray(T.domain_fan().ray(i)).ray.gen());
    if (orient < 0) std::reverse(images.begin(), images.end());
    int w = 0;
    try {
        w = winding_number(images);
    } catch (const std::invalid_argument&) {
        v.diagnostic = "ray images do not advance monotonically";
        return v;
    }
    if (w != 1) {
        v.diagnostic = "ray images wind " + std::to_string(w) +
                       " times: covering degree > 1, not a homeomorphism";
        return v;
    }
    v.accepted = true;
    v.orientation = orient > 0 ? Orientation::preserving : Orientation::reversing;
    return v;
}

}  // namespace toricstab
