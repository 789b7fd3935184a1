#include "pod/transport.hpp"

#include <arpa/inet.h>
#include <netinet/in.h>
#include <netinet/tcp.h>
#include <sys/socket.h>
#include <unistd.h>

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstring>

namespace pod::net {

namespace {

using Clock = std::chrono::steady_clock;

Clock::time_point processEpoch() {
    static const Clock::time_point epoch = Clock::now();
    return epoch;
}

double nowUs() {
    return std::chrono::duration<double, std::micro>(Clock::now() - processEpoch()).count();
}

int connectTo(const Endpoint& ep) {
    int fd = ::socket(AF_INET, SOCK_STREAM, 0);
    if (fd < 0) throw std::runtime_error("socket() failed");
    sockaddr_in addr{};
    addr.sin_family = AF_INET;
    addr.sin_port = htons(ep.port);
    if (inet_pton(AF_INET, ep.host.c_str(), &addr.sin_addr) != 1) {
        ::close(fd);
        throw std::runtime_error("bad address: " + ep.host);
    }
    if (::connect(fd, reinterpret_cast<sockaddr*>(&addr), sizeof(addr)) != 0) {
        ::close(fd);
        throw std::runtime_error("connect() failed to port " + std::to_string(ep.port));
    }
    int one = 1;
    ::setsockopt(fd, IPPROTO_TCP, TCP_NODELAY, &one, sizeof(one));
    return fd;
}

int listenOn(std::uint16_t port) {
    int fd = ::socket(AF_INET, SOCK_STREAM, 0);
    if (fd < 0) throw std::runtime_error("socket() failed");
    int one = 1;
    ::setsockopt(fd, SOL_SOCKET, SO_REUSEADDR, &one, sizeof(one));
    sockaddr_in addr{};
    addr.sin_family = AF_INET;
    addr.sin_port = htons(port);
    addr.sin_addr.s_addr = htonl(INADDR_LOOPBACK);
    if (::bind(fd, reinterpret_cast<sockaddr*>(&addr), sizeof(addr)) != 0) {
        ::close(fd);
        throw std::runtime_error("bind() failed on port " + std::to_string(port));
    }
    if (::listen(fd, 128) != 0) {
        ::close(fd);
        throw std::runtime_error("listen() failed");
    }
    return fd;
}

bool sendAll(int fd, std::string_view data) {
    std::size_t off = 0;
    while (off < data.size()) {
        ssize_t n = ::send(fd, data.data() + off, data.size() - off, MSG_NOSIGNAL);
        if (n <= 0) return false;
        off += static_cast<std::size_t>(n);
    }
    return true;
}

double drawDelayMs(std::mt19937_64& rng, const NetDelay& delay) {
    if (!delay.enabled()) return 0.0;
    const double span = std::max(0.0, delay.maxMs - delay.minMs);
    if (span == 0.0) return delay.minMs;
    const double unit = static_cast<double>(rng() >> 11) / static_cast<double>(1ull << 53);
    return delay.minMs + unit * span;
}

constexpr std::size_t kMaxPendingBytes = 8u << 20;

}  // namespace

std::uint64_t steadyNowMs() { return static_cast<std::uint64_t>(nowUs() / 1000.0); }

// ---------------------------------------------------------------------------
// ReplicaServer

struct ReplicaServer::Conn {
    int fd = -1;
    std::uint64_t id = 0;
    Bytes outPending;
    bool shed = false;
};

struct ReplicaServer::WorkItem {
    enum class Kind { InFrame, RoundEnd, ConnClosed };
    Kind kind = Kind::RoundEnd;
    std::uint64_t connId = 0;
    Frame frame{FrameTag::Connect, {}};
};

struct ReplicaServer::QueueEntry {
    double readyAtUs = 0.0;
    std::uint64_t seq = 0;
    WorkItem item;

    bool operator>(const QueueEntry& other) const {
        return readyAtUs != other.readyAtUs ? readyAtUs > other.readyAtUs : seq > other.seq;
    }
};

ReplicaServer::ReplicaServer(ReplicaId id, const KeyRing& ring, std::uint16_t port, ServerOptions options)
    : id_(id),
      ring_(&ring),
      port_(port),
      options_(options),
      delayRng_(options.inboundDelay.seed * 7919 + id + 1) {
    ReplicaOptions ropts;
    ropts.heartbeatSkipWhenActive = options_.heartbeatSkipWhenActive;
    replica_ = std::make_unique<Replica>(
        id, ring.registry.sigScheme(), ring.replicaKeys[id].sk, ring.registry.sid,
        [] { return steadyNowMs(); },
        [this](Replica::ClientRef c, const Vote& v) {
            sendToConn(c, encodeFrame(FrameTag::Vote, encodeVoteWire(v)));
        },
        ropts);
}

ReplicaServer::~ReplicaServer() { stop(); }

void ReplicaServer::start() {
    if (running_.exchange(true)) return;
    listenFd_ = listenOn(port_);
    acceptThread_ = std::thread([this] { acceptLoop(); });
    workerThread_ = std::thread([this] { workerLoop(); });
    if (options_.heartbeatIntervalMs > 0) {
        heartbeatThread_ = std::thread([this] { heartbeatLoop(); });
    }
}

void ReplicaServer::stop() {
    if (!running_.exchange(false)) return;
    ::shutdown(listenFd_, SHUT_RDWR);
    ::close(listenFd_);
    {
        std::lock_guard<std::mutex> lock(mu_);
        for (auto& [id, conn] : conns_) {
            ::shutdown(conn->fd, SHUT_RDWR);
        }
    }
    cv_.notify_all();
    if (acceptThread_.joinable()) acceptThread_.join();
    if (workerThread_.joinable()) workerThread_.join();
    if (heartbeatThread_.joinable()) heartbeatThread_.join();
    for (auto& t : connThreads_) {
        if (t.joinable()) t.join();
    }
    std::lock_guard<std::mutex> lock(mu_);
    for (auto& [id, conn] : conns_) ::close(conn->fd);
    conns_.clear();
}

void ReplicaServer::acceptLoop() {
    while (running_) {
        int fd = ::accept(listenFd_, nullptr, nullptr);
        if (fd < 0) {
            if (!running_) break;
            continue;
        }
        int one = 1;
        ::setsockopt(fd, IPPROTO_TCP, TCP_NODELAY, &one, sizeof(one));
        auto conn = std::make_shared<Conn>();
        conn->fd = fd;
        {
            std::lock_guard<std::mutex> lock(mu_);
            conn->id = nextConnId_++;
            conns_[conn->id] = conn;
            connThreads_.emplace_back([this, conn] { connLoop(conn); });
        }
    }
}

void ReplicaServer::connLoop(std::shared_ptr<Conn> conn) {
    Bytes buffer;
    char chunk[16384];
    while (running_) {
        ssize_t n = ::recv(conn->fd, chunk, sizeof(chunk), 0);
        if (n <= 0) break;
        buffer.append(chunk, static_cast<std::size_t>(n));
        std::size_t consumed = 0;
        try {
            while (true) {
                auto frame = tryDecodeFrame(std::string_view(buffer).substr(consumed));
                if (!frame) break;
                WorkItem item;
                item.kind = WorkItem::Kind::InFrame;
                item.connId = conn->id;
                item.frame = std::move(frame->first);
                consumed += frame->second;
                double delayMs;
                {
                    std::lock_guard<std::mutex> lock(mu_);
                    delayMs = drawDelayMs(delayRng_, options_.inboundDelay);
                }
                pushWork(std::move(item), delayMs);
            }
        } catch (const CodecError&) {
            break;  // corrupt stream; drop the connection
        }
        buffer.erase(0, consumed);
    }
    WorkItem closed;
    closed.kind = WorkItem::Kind::ConnClosed;
    closed.connId = conn->id;
    pushWork(std::move(closed), 0.0);
}

void ReplicaServer::pushWork(WorkItem item, double delayMs) {
    std::lock_guard<std::mutex> lock(mu_);
    QueueEntry entry;
    entry.readyAtUs = nowUs() + delayMs * 1000.0;
    entry.seq = workSeq_++;
    entry.item = std::move(item);
    queue_.push_back(std::move(entry));
    std::push_heap(queue_.begin(), queue_.end(), std::greater<>());
    cv_.notify_one();
}

void ReplicaServer::workerLoop() {
    std::unique_lock<std::mutex> lock(mu_);
    while (running_) {
        if (queue_.empty()) {
            cv_.wait_for(lock, std::chrono::milliseconds(20));
            continue;
        }
        double waitUs = queue_.front().readyAtUs - nowUs();
        if (waitUs > 0) {
            cv_.wait_for(lock, std::chrono::microseconds(static_cast<std::int64_t>(waitUs) + 1));
            continue;
        }
        std::pop_heap(queue_.begin(), queue_.end(), std::greater<>());
        WorkItem item = std::move(queue_.back().item);
        queue_.pop_back();
        lock.unlock();
        switch (item.kind) {
            case WorkItem::Kind::InFrame:
                if (item.frame.tag == FrameTag::Connect) {
                    replica_->onConnect(item.connId);
                } else if (item.frame.tag == FrameTag::Write) {
                    replica_->onWrite(item.frame.payload);
                }
                break;
            case WorkItem::Kind::RoundEnd:
                replica_->onRoundEnd(steadyNowMs());
                break;
            case WorkItem::Kind::ConnClosed:
                replica_->disconnect(item.connId);
                break;
        }
        lock.lock();
    }
}

void ReplicaServer::heartbeatLoop() {
    while (running_) {
        std::this_thread::sleep_for(std::chrono::milliseconds(options_.heartbeatIntervalMs));
        if (!running_) break;
        WorkItem item;
        item.kind = WorkItem::Kind::RoundEnd;
        pushWork(std::move(item), 0.0);
    }
}

void ReplicaServer::sendToConn(std::uint64_t connId, const Bytes& bytes) {
    std::shared_ptr<Conn> conn;
    {
        std::lock_guard<std::mutex> lock(mu_);
        auto it = conns_.find(connId);
        if (it == conns_.end() || it->second->shed) return;
        conn = it->second;
    }
    conn->outPending.append(bytes);
    std::size_t off = 0;
    while (off < conn->outPending.size()) {
        ssize_t n = ::send(conn->fd, conn->outPending.data() + off, conn->outPending.size() - off,
                           MSG_NOSIGNAL | MSG_DONTWAIT);
        if (n > 0) {
            off += static_cast<std::size_t>(n);
            continue;
        }
        if (n < 0 && (errno == EAGAIN || errno == EWOULDBLOCK)) break;
        shedConn(connId);  // broken pipe
        return;
    }
    conn->outPending.erase(0, off);
    // A reader that cannot keep up loses its connection rather than stalling
    // the replica; from that reader's view this is an omission fault.
    if (conn->outPending.size() > kMaxPendingBytes) shedConn(connId);
}

void ReplicaServer::shedConn(std::uint64_t connId) {
    replica_->disconnect(connId);
    std::lock_guard<std::mutex> lock(mu_);
    auto it = conns_.find(connId);
    if (it != conns_.end()) {
        it->second->shed = true;
        ::shutdown(it->second->fd, SHUT_RDWR);
    }
}

// ---------------------------------------------------------------------------
// WriterClient

WriterClient::WriterClient(std::vector<Endpoint> replicas) : endpoints_(std::move(replicas)) {}

WriterClient::~WriterClient() { close(); }

void WriterClient::connectAll() {
    fds_.reserve(endpoints_.size());
    for (const Endpoint& ep : endpoints_) fds_.push_back(connectTo(ep));
}

void WriterClient::write(const Bytes& tx) {
    Bytes frame = encodeFrame(FrameTag::Write, tx);
    for (int fd : fds_) sendAll(fd, frame);
}

void WriterClient::close() {
    for (int fd : fds_) ::close(fd);
    fds_.clear();
}

// ---------------------------------------------------------------------------
// ReaderClient

struct ReaderClient::PendingFrame {
    double readyAtUs = 0.0;
    std::uint64_t seq = 0;
    Bytes frame;

    bool operator>(const PendingFrame& other) const {
        return readyAtUs != other.readyAtUs ? readyAtUs > other.readyAtUs : seq > other.seq;
    }
};

ReaderClient::ReaderClient(const Registry& registry, std::vector<Endpoint> replicas, NetDelay delay,
                           QuorumCallback onQuorum)
    : registry_(registry),
      endpoints_(std::move(replicas)),
      delay_(delay),
      onQuorum_(std::move(onQuorum)),
      delayRng_(delay.seed * 104729 + 13) {
    client_ = std::make_unique<PodClient>(registry_, nullptr);
}

ReaderClient::~ReaderClient() { stop(); }

void ReaderClient::start() {
    if (running_.exchange(true)) return;
    Bytes connectFrame = encodeFrame(FrameTag::Connect, {});
    fds_.reserve(endpoints_.size());
    for (std::size_t i = 0; i < endpoints_.size(); ++i) {
        int fd = connectTo(endpoints_[i]);
        sendAll(fd, connectFrame);
        fds_.push_back(fd);
    }
    for (std::size_t i = 0; i < fds_.size(); ++i) {
        connThreads_.emplace_back([this, i] { connLoop(i, fds_[i]); });
    }
    ingestThread_ = std::thread([this] { ingestLoop(); });
}

void ReaderClient::stop() {
    if (!running_.exchange(false)) return;
    for (int fd : fds_) ::shutdown(fd, SHUT_RDWR);
    cv_.notify_all();
    for (auto& t : connThreads_) {
        if (t.joinable()) t.join();
    }
    if (ingestThread_.joinable()) ingestThread_.join();
    for (int fd : fds_) ::close(fd);
    fds_.clear();
    connThreads_.clear();
}

void ReaderClient::connLoop(std::size_t replicaIdx, int fd) {
    (void)replicaIdx;
    Bytes buffer;
    char chunk[16384];
    while (running_) {
        ssize_t n = ::recv(fd, chunk, sizeof(chunk), 0);
        if (n <= 0) break;
        buffer.append(chunk, static_cast<std::size_t>(n));
        std::size_t consumed = 0;
        try {
            while (true) {
                auto frame = tryDecodeFrame(std::string_view(buffer).substr(consumed));
                if (!frame) break;
                consumed += frame->second;
                double delayMs;
                {
                    std::lock_guard<std::mutex> lock(mu_);
                    delayMs = drawDelayMs(delayRng_, delay_);
                }
                pushFrame(encodeFrame(frame->first.tag, frame->first.payload), delayMs);
            }
        } catch (const CodecError&) {
            break;
        }
        buffer.erase(0, consumed);
    }
}

void ReaderClient::pushFrame(Bytes frame, double delayMs) {
    std::lock_guard<std::mutex> lock(mu_);
    PendingFrame entry;
    entry.readyAtUs = nowUs() + delayMs * 1000.0;
    entry.seq = queue_.size();
    entry.frame = std::move(frame);
    queue_.push_back(std::move(entry));
    std::push_heap(queue_.begin(), queue_.end(), std::greater<>());
    cv_.notify_one();
}

void ReaderClient::ingestLoop() {
    std::unique_lock<std::mutex> lock(mu_);
    while (running_) {
        if (queue_.empty()) {
            cv_.wait_for(lock, std::chrono::milliseconds(20));
            continue;
        }
        double waitUs = queue_.front().readyAtUs - nowUs();
        if (waitUs > 0) {
            cv_.wait_for(lock, std::chrono::microseconds(static_cast<std::int64_t>(waitUs) + 1));
            continue;
        }
        std::pop_heap(queue_.begin(), queue_.end(), std::greater<>());
        Bytes frame = std::move(queue_.back().frame);
        queue_.pop_back();
        lock.unlock();

        auto decoded = tryDecodeFrame(frame);
        if (decoded && decoded->first.tag == FrameTag::Vote) {
            auto vote = decodeVoteWire(decoded->first.payload);
            if (vote) {
                bool hitQuorum = false;
                Bytes tx = vote->tx;
                {
                    std::lock_guard<std::mutex> clientLock(clientMu_);
                    if (client_->onVote(*vote) == VoteOutcome::Accepted && !isHeartbeatTx(tx)) {
                        hitQuorum = client_->voteCount(tx) == registry_.profile.alpha;
                    }
                }
                if (hitQuorum && onQuorum_) onQuorum_(tx, static_cast<std::uint64_t>(nowUs()));
            }
        }
        lock.lock();
    }
}

ReadResult ReaderClient::read() {
    std::lock_guard<std::mutex> lock(clientMu_);
    return client_->read();
}

// ---------------------------------------------------------------------------
// Latency harness

LatencySummary summarize(const std::vector<LatencySample>& samples) {
    LatencySummary s;
    std::vector<double> ok;
    for (const LatencySample& sample : samples) {
        if (sample.ok) {
            ok.push_back(sample.ms);
        } else {
            ++s.failed;
        }
    }
    s.samples = ok.size();
    if (ok.empty()) return s;
    std::sort(ok.begin(), ok.end());
    double sum = 0;
    for (double v : ok) sum += v;
    s.meanMs = sum / static_cast<double>(ok.size());
    s.p50Ms = ok[ok.size() / 2];
    s.p95Ms = ok[std::min(ok.size() - 1, static_cast<std::size_t>(ok.size() * 95 / 100))];
    double var = 0;
    for (double v : ok) var += (v - s.meanMs) * (v - s.meanMs);
    var = ok.size() > 1 ? var / static_cast<double>(ok.size() - 1) : 0.0;
    const double half = 1.96 * std::sqrt(var / static_cast<double>(ok.size()));
    s.ci95LoMs = s.meanMs - half;
    s.ci95HiMs = s.meanMs + half;
    return s;
}

BenchResult measureLatency(const BenchOptions& options) {
    KeyRing ring = makeKeyRing(options.profile, options.scheme, "bench", options.keySeed);

    std::vector<std::unique_ptr<ReplicaServer>> servers;
    std::vector<Endpoint> endpoints;
    for (std::uint32_t i = 0; i < options.profile.n; ++i) {
        ServerOptions sopts;
        sopts.heartbeatIntervalMs = options.heartbeatIntervalMs;
        sopts.heartbeatSkipWhenActive = true;
        sopts.inboundDelay = options.netDelay;
        sopts.inboundDelay.seed = options.netDelay.seed + 1000 + i;
        auto server = std::make_unique<ReplicaServer>(
            i, ring, static_cast<std::uint16_t>(options.basePort + i), sopts);
        server->start();
        endpoints.push_back({"127.0.0.1", static_cast<std::uint16_t>(options.basePort + i)});
        servers.push_back(std::move(server));
    }

    std::mutex mu;
    std::condition_variable cv;
    std::map<Bytes, double> quorumAtUs;
    ReaderClient reader(ring.registry, endpoints, options.netDelay, [&](const Bytes& tx, std::uint64_t atUs) {
        std::lock_guard<std::mutex> lock(mu);
        quorumAtUs.emplace(tx, static_cast<double>(atUs));
        cv.notify_all();
    });
    reader.start();

    WriterClient writer(endpoints);
    writer.connectAll();

    auto pace = std::chrono::duration<double, std::milli>(options.paceMs);
    std::this_thread::sleep_for(std::chrono::milliseconds(50));  // let CONNECTs land

    for (std::uint32_t i = 0; i < options.warmupTxs; ++i) {
        writer.write("warmup-" + std::to_string(i));
        std::this_thread::sleep_for(pace);
    }

    std::vector<std::pair<Bytes, double>> writesUs;
    writesUs.reserve(options.txCount);
    for (std::uint32_t i = 0; i < options.txCount; ++i) {
        Bytes tx = "tx-" + std::to_string(i);
        writesUs.emplace_back(tx, nowUs());
        writer.write(tx);
        std::this_thread::sleep_for(pace);
    }

    {
        auto measuredDone = [&] {
            std::size_t n = 0;
            for (const auto& [tx, at] : quorumAtUs) {
                if (tx.rfind("tx-", 0) == 0) ++n;
            }
            return n >= options.txCount;
        };
        std::unique_lock<std::mutex> lock(mu);
        cv.wait_for(lock, std::chrono::duration<double, std::milli>(options.timeoutMs), measuredDone);
    }

    BenchResult result;
    {
        std::lock_guard<std::mutex> lock(mu);
        for (const auto& [tx, t0] : writesUs) {
            LatencySample sample;
            sample.tx = tx;
            auto it = quorumAtUs.find(tx);
            if (it != quorumAtUs.end()) {
                sample.ok = true;
                sample.ms = (it->second - t0) / 1000.0;
            }
            result.samples.push_back(std::move(sample));
        }
    }
    result.summary = summarize(result.samples);

    reader.stop();
    writer.close();
    for (auto& server : servers) server->stop();
    return result;
}

}  // namespace pod::net
