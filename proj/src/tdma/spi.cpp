// SPDX-License-Identifier: Apache-2.0
#include "cryomux/tdma/spi.hpp"

#include <sstream>

#include "cryomux/error.hpp"

namespace cryomux::tdma {

MuxState MuxState::select(int channel) {
    if (channel < 0 || channel >= kMuxChannels) {
        throw Error(ErrorCode::BadChannel,
                    "mux channel " + std::to_string(channel) + " is outside [0, 7]");
    }
    return MuxState(channel);
}

std::string MuxState::to_string() const {
    return channel_ ? std::to_string(*channel_) : std::string("none");
}

SpiFrame encode_frame(const MuxState& state) {
    if (state.is_none()) {
        return SpiFrame{0};
    }
    return SpiFrame{static_cast<std::uint8_t>(SpiFrame::kEnableBit |
                                              (*state.selected() & SpiFrame::kAddressMask))};
}

MuxState decode_frame(SpiFrame frame) {
    if (frame.raw & SpiFrame::kReservedMask) {
        std::ostringstream os;
        os << "reserved bits set in SPI word 0x" << std::hex << static_cast<int>(frame.raw);
        throw Error(ErrorCode::ReservedBitsSet, os.str());
    }
    if (!(frame.raw & SpiFrame::kEnableBit)) {
        return MuxState::none();
    }
    return MuxState::select(frame.raw & SpiFrame::kAddressMask);
}

MuxState apply_frame(const MuxState& /*current*/, SpiFrame frame) { return decode_frame(frame); }

}  // namespace cryomux::tdma
