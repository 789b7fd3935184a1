#pragma once

#include <string>

#include "pod/accountability.hpp"
#include "pod/registry.hpp"
#include "pod/types.hpp"

namespace pod {

// Versioned binary files, all using the codec's big-endian length-prefixed
// framing. Each embeds the registry (profile, scheme, sid, public keys) so a
// verifier needs nothing but the file.

struct PodFile {
    Registry registry;
    PodData data;
    Certificates certs;
};

struct TranscriptFile {
    Registry registry;
    Transcript transcript;
};

struct EvidenceFile {
    Registry registry;
    Bytes sequencerPk;
    Bytes ssid;
    SequencerEvidence evidence;
};

Bytes encodePodFile(const PodFile& file);
PodFile decodePodFile(std::string_view data);  // throws CodecError

Bytes encodeTranscriptFile(const TranscriptFile& file);
TranscriptFile decodeTranscriptFile(std::string_view data);

Bytes encodeEvidenceFile(const EvidenceFile& file);
EvidenceFile decodeEvidenceFile(std::string_view data);

void writeFile(const std::string& path, std::string_view data);
Bytes readFile(const std::string& path);

}  // namespace pod
