#include "frameprov/tee.hpp"

#include "frameprov/errors.hpp"

namespace frameprov {

RecordingSession::RecordingSession(const KeyPair& deviceKey, std::string sensorId,
                                   std::uint64_t timestamp, std::uint64_t sequenceNumber,
                                   std::optional<Digest> anchorHash, std::uint32_t width,
                                   std::uint32_t height)
    : deviceKey_(deviceKey), width_(width), height_(height) {
    require(width >= kMinChainWidth && height >= kMinChainHeight, Errc::Dimension,
            "recording dimensions below the 11x2 minimum");
    GenesisMetadata meta;
    meta.devicePublicKey = deviceKey.publicKey;
    meta.timestamp = timestamp;
    meta.sequenceNumber = sequenceNumber;
    meta.anchorHash = anchorHash;
    meta.sensorId = std::move(sensorId);
    Frame genesis = buildGenesis(meta, width, height);
    lastDigest_ = frameDigest(genesis);
    arrays_.push_back(std::move(genesis));
}

Frame RecordingSession::feed(const Frame& raw) {
    require(state_ == State::Recording, Errc::State, "feed after stop");
    require(raw.width == width_ && raw.height == height_, Errc::Dimension,
            "frame dimensions differ from the session");
    require(raw.pixels.size() == raw.byteSize(), Errc::Structural, "malformed frame");
    Frame chained = withHashRow(raw, lastDigest_);
    lastDigest_ = frameDigest(chained);
    arrays_.push_back(chained);
    return chained;
}

std::uint64_t RecordingSession::markSnippet() {
    require(state_ == State::Recording, Errc::State, "mark after stop");
    require(arrays_.size() > 1, Errc::State, "no content frames recorded yet");
    std::uint64_t index = arrays_.size() - 2;
    require(pendingSnippets_.empty() || pendingSnippets_.back() < index, Errc::Duplicate,
            "snippet already marked at this index");
    pendingSnippets_.push_back(index);
    return index;
}

FrameChain RecordingSession::stop(std::uint32_t fpsNum, std::uint32_t fpsDen) {
    require(state_ == State::Recording, Errc::State, "stop after stop");
    require(arrays_.size() > 1, Errc::State, "cannot stop with zero content frames");
    require(fpsDen >= 1, Errc::Structural, "fpsDen must be at least 1");

    TrailerMetadata trailer;
    trailer.contentCount = arrays_.size() - 1;
    trailer.fpsNum = fpsNum;
    trailer.fpsDen = fpsDen;
    for (std::uint64_t index : pendingSnippets_) {
        Digest d = frameDigest(arrays_[index + 1]);
        trailer.snippets.push_back({index, sign(snippetMessage(d, index), deviceKey_)});
    }
    trailer.finalSignature =
        sign(finalMessage(lastDigest_, trailer.contentCount, fpsNum, fpsDen), deviceKey_);
    Frame trailerFrame = buildTrailer(trailer, width_, height_);

    FrameChain chain;
    chain.width = width_;
    chain.height = height_;
    chain.fpsNum = fpsNum;
    chain.fpsDen = fpsDen;
    chain.arrays = std::move(arrays_);
    chain.arrays.push_back(std::move(trailerFrame));
    state_ = State::Finalized;
    return chain;
}

} // namespace frameprov
