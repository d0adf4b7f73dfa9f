#pragma once

// One-sided reads over TCP.
//
// Request  (29 bytes, little-endian): "RGET" | u8 window (0 offsets, 1 adjacency)
//                                     | u64 target node | u64 element offset | u64 element length
// Response: u8 status (0 ok, 1 range, 2 protocol) | u64 element length | length x u64 payload
//
// One request per frame; clients may pipeline. A protocol error is answered
// and the connection is then closed.

#include <array>
#include <atomic>
#include <cstdint>
#include <memory>
#include <mutex>
#include <span>
#include <string>
#include <thread>
#include <vector>

#include "tricache/window.hpp"

namespace tricache {

inline constexpr std::size_t kRequestBytes = 29;

enum class WireStatus : std::uint8_t { Ok = 0, Range = 1, Protocol = 2 };

std::array<std::uint8_t, kRequestBytes> encode_request(const GetRequest& req);
/// Throws ProtocolError on bad magic or window id.
GetRequest decode_request(std::span<const std::uint8_t, kRequestBytes> frame);

struct Peer {
  std::string host = "127.0.0.1";
  std::uint16_t port = 0;
};

/// Parses "host:port[,host:port...]".
std::vector<Peer> parse_peers(const std::string& spec);

/// Serves reads against the windows exposed in `fabric`, one thread per
/// connection. Requests are stateless and independent.
class TcpServer {
 public:
  /// Port 0 binds an ephemeral port; see port().
  TcpServer(const Fabric& fabric, const std::string& host = "127.0.0.1", std::uint16_t port = 0);
  ~TcpServer();
  TcpServer(const TcpServer&) = delete;
  TcpServer& operator=(const TcpServer&) = delete;

  std::uint16_t port() const noexcept { return port_; }
  Peer peer() const { return {host_, port_}; }
  void stop();

  std::uint64_t requests_served() const noexcept { return served_.load(); }
  std::uint64_t protocol_errors() const noexcept { return proto_errors_.load(); }
  std::uint64_t range_errors() const noexcept { return range_errors_.load(); }

 private:
  void accept_loop();
  void serve(int fd);

  const Fabric& fabric_;
  std::string host_;
  std::uint16_t port_ = 0;
  int listen_fd_ = -1;
  std::atomic<bool> stopping_{false};
  std::thread acceptor_;
  std::mutex mu_;
  std::vector<std::thread> workers_;
  std::vector<int> conns_;
  std::atomic<std::uint64_t> served_{0}, proto_errors_{0}, range_errors_{0};
};

/// Client side. With a single peer every target node is served by it;
/// otherwise peers[k] serves node k. One connection per peer, opened lazily.
/// Not thread-safe: give each requesting node its own instance.
class TcpTransport final : public Transport {
 public:
  explicit TcpTransport(std::vector<Peer> peers);
  ~TcpTransport() override;
  TcpTransport(const TcpTransport&) = delete;
  TcpTransport& operator=(const TcpTransport&) = delete;

  /// Throws TransportError, ProtocolError, or std::out_of_range (status 1).
  std::vector<std::uint64_t> get(const GetRequest& req) override;

 private:
  int connection(NodeId target);

  std::vector<Peer> peers_;
  std::vector<int> fds_;
};

namespace net {
/// Blocking connect with TCP_NODELAY. Throws TransportError.
int connect_tcp(const Peer& peer);
void write_all(int fd, std::span<const std::uint8_t> bytes);
/// False on orderly EOF before the first byte; throws TransportError on a
/// partial read or socket error.
bool read_exact(int fd, std::span<std::uint8_t> bytes);
void close_fd(int fd);
}  // namespace net

}  // namespace tricache
