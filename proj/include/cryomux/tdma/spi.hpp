// SPDX-License-Identifier: Apache-2.0
#pragma once

// Switch control word: bit 7 enables the switch, bits 2..0 address the
// channel, bits 6..3 are reserved and must be zero.

#include <cstdint>
#include <optional>
#include <string>

namespace cryomux::tdma {

inline constexpr int kMuxChannels = 8;

/// Which throw of the single-pole switch is closed, if any.
class MuxState {
public:
    MuxState() = default;

    static MuxState none() { return MuxState(); }
    /// Throws BadChannel outside [0, 7].
    static MuxState select(int channel);

    [[nodiscard]] std::optional<int> selected() const noexcept { return channel_; }
    [[nodiscard]] bool is_none() const noexcept { return !channel_.has_value(); }
    [[nodiscard]] bool selects(int channel) const noexcept { return channel_ && *channel_ == channel; }
    [[nodiscard]] std::string to_string() const;

    friend bool operator==(const MuxState&, const MuxState&) = default;

private:
    explicit MuxState(int channel) : channel_(channel) {}
    std::optional<int> channel_;
};

struct SpiFrame {
    std::uint8_t raw = 0;

    static constexpr std::uint8_t kEnableBit = 0x80;
    static constexpr std::uint8_t kReservedMask = 0x78;
    static constexpr std::uint8_t kAddressMask = 0x07;

    friend bool operator==(const SpiFrame&, const SpiFrame&) = default;
};

SpiFrame encode_frame(const MuxState& state);

/// Throws ReservedBitsSet when any of bits 6..3 is set. With the enable bit
/// clear the address bits are ignored.
MuxState decode_frame(SpiFrame frame);

/// Frames take effect atomically; a channel swap never passes through an
/// intermediate state.
MuxState apply_frame(const MuxState& current, SpiFrame frame);

}  // namespace cryomux::tdma
