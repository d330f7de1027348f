#pragma once

#include <iosfwd>
#include <string>
#include <vector>

#include "pingpong/adversary.hpp"
#include "pingpong/protocol.hpp"

namespace pingpong {

// One session on disk: a header line with the full config (including seed,
// attack, and message, so the session can be replayed bit-exactly), one line
// per RoundRecord, and a result line.
struct TranscriptFile {
    SessionConfig config;
    AttackKind attack = AttackKind::NoEve;
    std::vector<BellIndex> message;
    std::vector<RoundRecord> rounds;
    bool detected = false;
    std::vector<BellIndex> bob_decoded;
};

void write_transcript(std::ostream& out, const SessionConfig& config, AttackKind attack,
                      const std::vector<BellIndex>& message, const SessionResult& result);

// Throws std::runtime_error on schema violations.
TranscriptFile read_transcript(std::istream& in);

struct ReplayResult {
    bool identical = false;
    int first_divergent_round = -1;  // -1 when identical or length mismatch
    std::string detail;
};

ReplayResult replay_transcript(const TranscriptFile& recorded);

}  // namespace pingpong
