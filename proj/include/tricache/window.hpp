#pragma once

#include <cstdint>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include "tricache/partition.hpp"

namespace tricache {

enum class WindowId : std::uint8_t { Offsets = 0, Adjacency = 1 };

const char* to_string(WindowId w);

/// One-sided read of `length` u64 elements starting at element `offset`.
struct GetRequest {
  NodeId target = 0;
  WindowId window = WindowId::Offsets;
  std::uint64_t offset = 0;
  std::uint64_t length = 0;

  std::uint64_t bytes() const noexcept { return 8 * length; }
  friend bool operator==(const GetRequest&, const GetRequest&) = default;
};

/// t(s) = alpha + s * beta for a read of s bytes.
struct CostModel {
  double alpha = 2e-6;   // seconds per message
  double beta = 1e-10;   // seconds per byte

  double cost(std::uint64_t bytes) const noexcept { return alpha + static_cast<double>(bytes) * beta; }
};

/// Read-only view of a node's exposed array. Does not own the memory.
struct WindowHandle {
  NodeId node = 0;
  WindowId id = WindowId::Offsets;
  std::span<const std::uint64_t> data;
};

/// Registry of exposed windows, shared read-only by every node and backend.
class Fabric {
 public:
  explicit Fabric(NodeId p);

  NodeId p() const noexcept { return windows_.size(); }

  /// Exposes the offsets and adjacency arrays of `local`, which must outlive
  /// the fabric. Throws InvalidState if the node is already exposed.
  std::pair<WindowHandle, WindowHandle> expose(const LocalCsr& local);
  bool exposed(NodeId node) const noexcept;
  const WindowHandle& window(NodeId node, WindowId id) const;

  /// Throws std::out_of_range if the target is unknown or the request leaves
  /// the window.
  std::span<const std::uint64_t> read(const GetRequest& req) const;

 private:
  struct Slot {
    bool exposed = false;
    WindowHandle offsets, adjacency;
  };
  std::vector<Slot> windows_;
};

/// Backend issuing one-sided reads. Implementations never involve the
/// target's epoch state.
class Transport {
 public:
  virtual ~Transport() = default;
  virtual std::vector<std::uint64_t> get(const GetRequest& req) = 0;
};

/// In-process backend: reads straight from the fabric.
class SimTransport final : public Transport {
 public:
  explicit SimTransport(const Fabric& fabric) : fabric_(fabric) {}
  std::vector<std::uint64_t> get(const GetRequest& req) override;

 private:
  const Fabric& fabric_;
};

struct TraceEvent {
  enum class Kind : std::uint8_t { Open, Get, Flush, Close };
  Kind kind = Kind::Open;
  NodeId node = 0;  // issuer
  NodeId peer = 0;  // target for gets; the issuer itself for epoch control
  WindowId window = WindowId::Offsets;
  std::uint64_t offset = 0;
  std::uint64_t length = 0;
  double cost = 0.0;
};

struct EndpointStats {
  std::uint64_t gets = 0;
  std::uint64_t bytes = 0;
  double comm_time = 0.0;  // modeled
  std::uint64_t epochs = 0;
  std::uint64_t flushes = 0;
};

/// Per-node access-epoch state machine plus accounting. Epoch operations are
/// node-local bookkeeping and never wait on or notify another node.
class Endpoint {
 public:
  Endpoint(NodeId self, Transport& transport, CostModel cost, bool record_trace = false);

  NodeId self() const noexcept { return self_; }
  bool epoch_open() const noexcept { return open_; }

  void open_epoch();
  void flush();
  void close_epoch();

  /// Issues the read and charges alpha + bytes*beta. `cost` receives the
  /// modeled seconds. Throws InvalidState outside an epoch.
  std::vector<std::uint64_t> get(const GetRequest& req, double* cost = nullptr);

  const EndpointStats& stats() const noexcept { return stats_; }
  const std::vector<TraceEvent>& trace() const noexcept { return trace_; }
  const CostModel& cost_model() const noexcept { return cost_; }

 private:
  void record(TraceEvent::Kind kind, NodeId peer, const GetRequest* req, double cost);

  NodeId self_;
  Transport& transport_;
  CostModel cost_;
  bool record_;
  bool open_ = false;
  EndpointStats stats_;
  std::vector<TraceEvent> trace_;
};

struct AsyncAudit {
  /// Epoch-control events that name a node other than their issuer.
  std::uint64_t cross_node_waits = 0;
  /// Events attributed to the wrong trace, gets outside an epoch, or
  /// open/close misordering.
  std::uint64_t order_violations = 0;

  bool clean() const noexcept { return cross_node_waits == 0 && order_violations == 0; }
};

/// `traces[k]` is node k's event log.
AsyncAudit audit_asynchrony(std::span<const std::vector<TraceEvent>> traces);

/// Sum of alpha + bytes*beta over the get events of a trace.
double modeled_comm_time(std::span<const TraceEvent> trace);

}  // namespace tricache
