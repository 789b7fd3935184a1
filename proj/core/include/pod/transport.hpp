#pragma once

#include <atomic>
#include <condition_variable>
#include <cstdint>
#include <functional>
#include <map>
#include <memory>
#include <mutex>
#include <random>
#include <string>
#include <thread>
#include <vector>

#include "pod/client.hpp"
#include "pod/registry.hpp"
#include "pod/replica.hpp"

namespace pod::net {

struct Endpoint {
    std::string host = "127.0.0.1";
    std::uint16_t port = 0;
};

// Emulated per-message transit delay, drawn uniformly from [minMs, maxMs].
// Zero on both ends disables it. The benchmark uses this to stand in for
// network distance, so quorum formation shows the order-statistics shape
// instead of loopback scheduling noise.
struct NetDelay {
    double minMs = 0.0;
    double maxMs = 0.0;
    std::uint64_t seed = 1;

    bool enabled() const { return maxMs > 0.0; }
};

// Milliseconds since process start; the real-transport notion of a round.
std::uint64_t steadyNowMs();

struct ServerOptions {
    std::uint32_t heartbeatIntervalMs = 50;  // 0 disables heartbeats
    bool heartbeatSkipWhenActive = true;
    NetDelay inboundDelay;
};

class ReplicaServer {
public:
    ReplicaServer(ReplicaId id, const KeyRing& ring, std::uint16_t port, ServerOptions options = {});
    ~ReplicaServer();

    void start();
    void stop();
    std::uint16_t port() const { return port_; }

private:
    struct Conn;
    struct WorkItem;

    void acceptLoop();
    void connLoop(std::shared_ptr<Conn> conn);
    void workerLoop();
    void heartbeatLoop();
    void pushWork(WorkItem item, double delayMs);
    void sendToConn(std::uint64_t connId, const Bytes& bytes);
    void shedConn(std::uint64_t connId);

    ReplicaId id_;
    const KeyRing* ring_;
    std::uint16_t port_;
    ServerOptions options_;

    int listenFd_ = -1;
    std::atomic<bool> running_{false};
    std::unique_ptr<Replica> replica_;

    std::mutex mu_;
    std::condition_variable cv_;
    struct QueueEntry;
    std::vector<QueueEntry> queue_;  // min-heap by readyAtMs
    std::uint64_t workSeq_ = 0;
    std::uint64_t nextConnId_ = 1;
    std::map<std::uint64_t, std::shared_ptr<Conn>> conns_;
    std::mt19937_64 delayRng_;

    std::thread acceptThread_;
    std::thread workerThread_;
    std::thread heartbeatThread_;
    std::vector<std::thread> connThreads_;
};

// Write-only client: opens one socket per replica and sends WRITE frames.
class WriterClient {
public:
    explicit WriterClient(std::vector<Endpoint> replicas);
    ~WriterClient();

    void connectAll();
    void write(const Bytes& tx);
    void close();

private:
    std::vector<Endpoint> endpoints_;
    std::vector<int> fds_;
};

// Streaming reader: connects to every replica, feeds votes into a PodClient
// on one ingest thread, and reports the instant each transaction reaches the
// confirmation quorum.
class ReaderClient {
public:
    using QuorumCallback = std::function<void(const Bytes& tx, std::uint64_t atMs)>;

    ReaderClient(const Registry& registry, std::vector<Endpoint> replicas, NetDelay delay,
                 QuorumCallback onQuorum);
    ~ReaderClient();

    void start();
    void stop();

    ReadResult read();

private:
    void connLoop(std::size_t replicaIdx, int fd);
    void ingestLoop();
    void pushFrame(Bytes frame, double delayMs);

    Registry registry_;
    std::vector<Endpoint> endpoints_;
    NetDelay delay_;
    QuorumCallback onQuorum_;

    std::unique_ptr<PodClient> client_;
    std::mutex clientMu_;

    std::atomic<bool> running_{false};
    std::vector<int> fds_;
    std::vector<std::thread> connThreads_;
    std::thread ingestThread_;

    std::mutex mu_;
    std::condition_variable cv_;
    struct PendingFrame;
    std::vector<PendingFrame> queue_;  // min-heap by readyAtMs
    std::mt19937_64 delayRng_;
};

struct LatencySample {
    Bytes tx;
    double ms = 0.0;
    bool ok = false;
};

struct LatencySummary {
    std::size_t samples = 0;
    std::size_t failed = 0;
    double meanMs = 0.0;
    double p50Ms = 0.0;
    double p95Ms = 0.0;
    double ci95LoMs = 0.0;
    double ci95HiMs = 0.0;
};

LatencySummary summarize(const std::vector<LatencySample>& samples);

struct BenchOptions {
    FaultProfile profile;
    SchemeId scheme = SchemeId::HmacTest;
    std::uint32_t txCount = 200;
    std::uint32_t warmupTxs = 10;
    std::uint16_t basePort = 19000;
    double paceMs = 4.0;
    double timeoutMs = 10000.0;
    NetDelay netDelay{1.0, 3.0, 1};
    std::uint32_t heartbeatIntervalMs = 50;
    std::uint64_t keySeed = 1;
};

struct BenchResult {
    std::vector<LatencySample> samples;
    LatencySummary summary;
};

// Spins up profile.n replica servers on loopback plus one writer and one
// reader, measures write-to-quorum latency per transaction.
BenchResult measureLatency(const BenchOptions& options);

}  // namespace pod::net
