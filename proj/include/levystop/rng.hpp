#pragma once

#include <array>
#include <cstdint>

namespace levystop {

/// Philox4x32-10 counter-based generator (Salmon et al., SC'11).
/// Pure function of (key, counter); no state besides what the caller keeps.
class Philox4x32 {
public:
    using Block = std::array<std::uint32_t, 4>;
    using Key = std::array<std::uint32_t, 2>;

    static Block generate(Block counter, Key key) noexcept;
};

/// Random stream for one simulated path. The stream is fully determined by
/// (master seed, path index); draws are consumed in order from the counter
/// sequence (path index, 0), (path index, 1), ...
class PathRng {
public:
    PathRng(std::uint64_t master_seed, std::uint64_t path_index) noexcept;

    /// Uniform in the open interval (0, 1).
    double uniform() noexcept;
    double normal() noexcept;
    /// Exponential with unit rate.
    double exponential() noexcept;

    std::uint64_t draws() const noexcept { return block_counter_; }

private:
    std::uint64_t next_u64() noexcept;

    Philox4x32::Key key_;
    std::uint64_t path_;
    std::uint64_t block_counter_ = 0;
    Philox4x32::Block buffer_{};
    int buffered_words_ = 0;  // 64-bit words left in buffer_ (0, 1 or 2)
    double spare_normal_ = 0.0;
    bool has_spare_ = false;
};

}  // namespace levystop
