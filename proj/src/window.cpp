#include "tricache/window.hpp"

#include <stdexcept>

#include "tricache/errors.hpp"

namespace tricache {

const char* to_string(WindowId w) { return w == WindowId::Offsets ? "offsets" : "adj"; }

Fabric::Fabric(NodeId p) : windows_(p) {
  if (p == 0) throw std::invalid_argument("fabric: p must be >= 1");
}

std::pair<WindowHandle, WindowHandle> Fabric::expose(const LocalCsr& local) {
  if (local.node >= windows_.size()) throw std::invalid_argument("expose: node id >= p");
  Slot& s = windows_[local.node];
  if (s.exposed) throw InvalidState("expose: node " + std::to_string(local.node) + " already exposed");
  s.exposed = true;
  s.offsets = {local.node, WindowId::Offsets, local.csr.offsets()};
  s.adjacency = {local.node, WindowId::Adjacency, local.csr.adjacencies()};
  return {s.offsets, s.adjacency};
}

bool Fabric::exposed(NodeId node) const noexcept { return node < windows_.size() && windows_[node].exposed; }

const WindowHandle& Fabric::window(NodeId node, WindowId id) const {
  if (!exposed(node)) throw std::out_of_range("window: node " + std::to_string(node) + " not exposed");
  const Slot& s = windows_[node];
  return id == WindowId::Offsets ? s.offsets : s.adjacency;
}

std::span<const std::uint64_t> Fabric::read(const GetRequest& req) const {
  const auto data = window(req.target, req.window).data;
  if (req.offset > data.size() || req.length > data.size() - req.offset)
    throw std::out_of_range("get: [" + std::to_string(req.offset) + ", +" + std::to_string(req.length) +
                            ") outside " + to_string(req.window) + " window of node " +
                            std::to_string(req.target));
  return data.subspan(req.offset, req.length);
}

std::vector<std::uint64_t> SimTransport::get(const GetRequest& req) {
  const auto data = fabric_.read(req);
  return {data.begin(), data.end()};
}

Endpoint::Endpoint(NodeId self, Transport& transport, CostModel cost, bool record_trace)
    : self_(self), transport_(transport), cost_(cost), record_(record_trace) {}

void Endpoint::record(TraceEvent::Kind kind, NodeId peer, const GetRequest* req, double cost) {
  if (!record_) return;
  TraceEvent ev;
  ev.kind = kind;
  ev.node = self_;
  ev.peer = peer;
  if (req) {
    ev.window = req->window;
    ev.offset = req->offset;
    ev.length = req->length;
  }
  ev.cost = cost;
  trace_.push_back(ev);
}

void Endpoint::open_epoch() {
  if (open_) throw InvalidState("open_epoch: epoch already open");
  open_ = true;
  ++stats_.epochs;
  record(TraceEvent::Kind::Open, self_, nullptr, 0.0);
}

void Endpoint::flush() {
  if (!open_) throw InvalidState("flush: no open epoch");
  ++stats_.flushes;
  record(TraceEvent::Kind::Flush, self_, nullptr, 0.0);
}

void Endpoint::close_epoch() {
  if (!open_) throw InvalidState("close_epoch: no open epoch");
  open_ = false;
  record(TraceEvent::Kind::Close, self_, nullptr, 0.0);
}

std::vector<std::uint64_t> Endpoint::get(const GetRequest& req, double* cost) {
  if (!open_) throw InvalidState("get: no open epoch");
  auto data = transport_.get(req);
  const double c = cost_.cost(req.bytes());
  ++stats_.gets;
  stats_.bytes += req.bytes();
  stats_.comm_time += c;
  record(TraceEvent::Kind::Get, req.target, &req, c);
  if (cost) *cost = c;
  return data;
}

AsyncAudit audit_asynchrony(std::span<const std::vector<TraceEvent>> traces) {
  AsyncAudit audit;
  for (NodeId k = 0; k < traces.size(); ++k) {
    bool open = false;
    for (const TraceEvent& ev : traces[k]) {
      if (ev.node != k) ++audit.order_violations;
      switch (ev.kind) {
        case TraceEvent::Kind::Open:
          if (ev.peer != ev.node) ++audit.cross_node_waits;
          if (open) ++audit.order_violations;
          open = true;
          break;
        case TraceEvent::Kind::Flush:
          if (ev.peer != ev.node) ++audit.cross_node_waits;
          if (!open) ++audit.order_violations;
          break;
        case TraceEvent::Kind::Close:
          if (ev.peer != ev.node) ++audit.cross_node_waits;
          if (!open) ++audit.order_violations;
          open = false;
          break;
        case TraceEvent::Kind::Get:
          if (!open) ++audit.order_violations;
          break;
      }
    }
    if (open) ++audit.order_violations;
  }
  return audit;
}

double modeled_comm_time(std::span<const TraceEvent> trace) {
  double t = 0.0;
  for (const TraceEvent& ev : trace)
    if (ev.kind == TraceEvent::Kind::Get) t += ev.cost;
  return t;
}

}  // namespace tricache
