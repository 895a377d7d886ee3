#include "levystop/rng.hpp"

#include <cmath>
#include <numbers>

namespace levystop {

namespace {
constexpr std::uint32_t kMul0 = 0xD2511F53u;
constexpr std::uint32_t kMul1 = 0xCD9E8D57u;
constexpr std::uint32_t kWeyl0 = 0x9E3779B9u;
constexpr std::uint32_t kWeyl1 = 0xBB67AE85u;
}  // namespace

Philox4x32::Block Philox4x32::generate(Block ctr, Key key) noexcept {
    for (int round = 0; round < 10; ++round) {
        if (round > 0) {
            key[0] += kWeyl0;
            key[1] += kWeyl1;
        }
        const std::uint64_t p0 = static_cast<std::uint64_t>(kMul0) * ctr[0];
        const std::uint64_t p1 = static_cast<std::uint64_t>(kMul1) * ctr[2];
        const auto hi0 = static_cast<std::uint32_t>(p0 >> 32), lo0 = static_cast<std::uint32_t>(p0);
        const auto hi1 = static_cast<std::uint32_t>(p1 >> 32), lo1 = static_cast<std::uint32_t>(p1);
        ctr = {hi1 ^ ctr[1] ^ key[0], lo1, hi0 ^ ctr[3] ^ key[1], lo0};
    }
    return ctr;
}

PathRng::PathRng(std::uint64_t master_seed, std::uint64_t path_index) noexcept
    : key_{static_cast<std::uint32_t>(master_seed), static_cast<std::uint32_t>(master_seed >> 32)},
      path_(path_index) {}

std::uint64_t PathRng::next_u64() noexcept {
    if (buffered_words_ == 0) {
        const Philox4x32::Block ctr{static_cast<std::uint32_t>(block_counter_),
                                    static_cast<std::uint32_t>(block_counter_ >> 32),
                                    static_cast<std::uint32_t>(path_), static_cast<std::uint32_t>(path_ >> 32)};
        buffer_ = Philox4x32::generate(ctr, key_);
        ++block_counter_;
        buffered_words_ = 2;
    }
    const int base = buffered_words_ == 2 ? 0 : 2;
    --buffered_words_;
    return (static_cast<std::uint64_t>(buffer_[base]) << 32) | buffer_[base + 1];
}

double PathRng::uniform() noexcept {
    return (static_cast<double>(next_u64() >> 11) + 0.5) * 0x1.0p-53;
}

double PathRng::normal() noexcept {
    if (has_spare_) {
        has_spare_ = false;
        return spare_normal_;
    }
    const double radius = std::sqrt(-2.0 * std::log(uniform()));
    const double angle = 2.0 * std::numbers::pi * uniform();
    spare_normal_ = radius * std::sin(angle);
    has_spare_ = true;
    return radius * std::cos(angle);
}

double PathRng::exponential() noexcept { return -std::log(uniform()); }

}  // namespace levystop
