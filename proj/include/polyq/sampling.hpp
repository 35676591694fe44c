#ifndef POLYQ_SAMPLING_HPP
#define POLYQ_SAMPLING_HPP

#include <cstdint>
#include <random>

#include "polyq/billiard.hpp"
#include "polyq/common.hpp"
#include "polyq/polygon.hpp"

namespace polyq {

// Uniform double in [0, 1) from the top 53 bits; avoids the
// implementation-defined std::uniform_real_distribution.
inline double unit_double(std::mt19937_64& engine) {
    return static_cast<double>(engine() >> 11) * 0x1.0p-53;
}

// Engine for one sample index. Monte Carlo loops draw through per-index
// engines, so results are independent of how samples are partitioned across
// threads.
inline std::mt19937_64 engine_for(std::uint64_t seed, std::uint64_t index) {
    std::seed_seq seq{static_cast<std::uint32_t>(seed), static_cast<std::uint32_t>(seed >> 32),
                      static_cast<std::uint32_t>(index), static_cast<std::uint32_t>(index >> 32)};
    return std::mt19937_64(seq);
}

// Draws (x, phi) from the normalized Liouville measure: x uniform in D by
// rejection from the bounding box, phi uniform in [0, 1).
class LiouvilleSampler {
  public:
    LiouvilleSampler(const RationalPolygon& poly, std::uint64_t seed)
        : poly_(&poly), seed_(seed) {}

    std::uint64_t seed() const { return seed_; }

    PhasePoint draw(std::mt19937_64& engine) const {
        const Vec2 lo = poly_->bbox_min();
        const Vec2 hi = poly_->bbox_max();
        Vec2 x;
        do {
            x = {lo.x + (hi.x - lo.x) * unit_double(engine),
                 lo.y + (hi.y - lo.y) * unit_double(engine)};
        } while (!poly_->contains(x));
        const double phi = unit_double(engine);
        return PhasePoint::from_angle(x, phi);
    }

    std::mt19937_64 engine_for_sample(std::uint64_t index) const {
        return engine_for(seed_, index);
    }

  private:
    const RationalPolygon* poly_;
    std::uint64_t seed_;
};

}  // namespace polyq

#endif  // POLYQ_SAMPLING_HPP
