#pragma once

#include "frameprov/chain.hpp"
#include "frameprov/crypto.hpp"
#include "frameprov/frame.hpp"

#include <cstdint>
#include <vector>

namespace frameprov {

/// Software simulator of the Tiny TEE: one session records one FrameChain.
///
/// The session is a single-owner state machine. Operations called in the
/// wrong state throw without mutating it. Keys are injected at construction;
/// the simulator never generates its own.
class RecordingSession {
public:
    enum class State { Recording, Finalized };

    /// Builds the genesis frame and enters the Recording state.
    RecordingSession(const KeyPair& deviceKey, std::string sensorId, std::uint64_t timestamp,
                     std::uint64_t sequenceNumber, std::optional<Digest> anchorHash,
                     std::uint32_t width, std::uint32_t height);

    /// Overwrites row 0 of `raw` with the running digest and accumulates the result.
    /// Returns the chained frame.
    Frame feed(const Frame& raw);

    /// Records the current last content index for snippet signing at stop; returns it.
    std::uint64_t markSnippet();

    /// Signs the trailer and returns the finished chain. The session becomes Finalized.
    FrameChain stop(std::uint32_t fpsNum, std::uint32_t fpsDen);

    State state() const { return state_; }
    std::uint64_t contentCount() const { return arrays_.size() - 1; }
    const Digest& lastDigest() const { return lastDigest_; }

private:
    State state_ = State::Recording;
    KeyPair deviceKey_;
    std::uint32_t width_;
    std::uint32_t height_;
    std::vector<Frame> arrays_; // genesis + chained content frames
    Digest lastDigest_{};
    std::vector<std::uint64_t> pendingSnippets_;
};

} // namespace frameprov
