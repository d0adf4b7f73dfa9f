#include "tricache/tcp.hpp"

#include <arpa/inet.h>
#include <netdb.h>
#include <netinet/in.h>
#include <netinet/tcp.h>
#include <poll.h>
#include <sys/socket.h>
#include <unistd.h>

#include <bit>
#include <cerrno>
#include <cstring>
#include <stdexcept>

#include "tricache/errors.hpp"

namespace tricache {

namespace {

void put_le(std::uint8_t* out, std::uint64_t v) {
  for (int i = 0; i < 8; ++i) out[i] = static_cast<std::uint8_t>(v >> (8 * i));
}

std::uint64_t get_le(const std::uint8_t* in) {
  std::uint64_t v = 0;
  for (int i = 0; i < 8; ++i) v |= std::uint64_t{in[i]} << (8 * i);
  return v;
}

void copy_payload_out(std::uint8_t* out, std::span<const std::uint64_t> data) {
  if constexpr (std::endian::native == std::endian::little) {
    if (!data.empty()) std::memcpy(out, data.data(), data.size() * 8);
  } else {
    for (std::size_t i = 0; i < data.size(); ++i) put_le(out + 8 * i, data[i]);
  }
}

std::string errno_text(const char* what) { return std::string(what) + ": " + std::strerror(errno); }

void set_nodelay(int fd) {
  int one = 1;
  ::setsockopt(fd, IPPROTO_TCP, TCP_NODELAY, &one, sizeof one);
}

}  // namespace

std::array<std::uint8_t, kRequestBytes> encode_request(const GetRequest& req) {
  std::array<std::uint8_t, kRequestBytes> f{};
  std::memcpy(f.data(), "RGET", 4);
  f[4] = static_cast<std::uint8_t>(req.window);
  put_le(f.data() + 5, req.target);
  put_le(f.data() + 13, req.offset);
  put_le(f.data() + 21, req.length);
  return f;
}

GetRequest decode_request(std::span<const std::uint8_t, kRequestBytes> f) {
  if (std::memcmp(f.data(), "RGET", 4) != 0) throw ProtocolError("bad request magic");
  if (f[4] > 1) throw ProtocolError("bad window id " + std::to_string(f[4]));
  GetRequest req;
  req.window = static_cast<WindowId>(f[4]);
  req.target = get_le(f.data() + 5);
  req.offset = get_le(f.data() + 13);
  req.length = get_le(f.data() + 21);
  return req;
}

std::vector<Peer> parse_peers(const std::string& spec) {
  std::vector<Peer> peers;
  std::size_t pos = 0;
  while (pos <= spec.size()) {
    const std::size_t comma = std::min(spec.find(',', pos), spec.size());
    const std::string item = spec.substr(pos, comma - pos);
    const std::size_t colon = item.rfind(':');
    if (item.empty() || colon == std::string::npos || colon == 0 || colon + 1 == item.size())
      throw std::invalid_argument("peer must be host:port, got '" + item + "'");
    const unsigned long port = std::stoul(item.substr(colon + 1));
    if (port == 0 || port > 65535) throw std::invalid_argument("bad port in '" + item + "'");
    peers.push_back({item.substr(0, colon), static_cast<std::uint16_t>(port)});
    pos = comma + 1;
  }
  return peers;
}

namespace net {

int connect_tcp(const Peer& peer) {
  addrinfo hints{};
  hints.ai_family = AF_INET;
  hints.ai_socktype = SOCK_STREAM;
  addrinfo* res = nullptr;
  const std::string port = std::to_string(peer.port);
  if (int rc = ::getaddrinfo(peer.host.c_str(), port.c_str(), &hints, &res); rc != 0)
    throw TransportError("resolve " + peer.host + ": " + ::gai_strerror(rc));
  int fd = -1;
  for (addrinfo* ai = res; ai; ai = ai->ai_next) {
    fd = ::socket(ai->ai_family, ai->ai_socktype, ai->ai_protocol);
    if (fd < 0) continue;
    if (::connect(fd, ai->ai_addr, ai->ai_addrlen) == 0) break;
    ::close(fd);
    fd = -1;
  }
  ::freeaddrinfo(res);
  if (fd < 0) throw TransportError("connect " + peer.host + ":" + port + " refused");
  set_nodelay(fd);
  return fd;
}

void write_all(int fd, std::span<const std::uint8_t> bytes) {
  std::size_t done = 0;
  while (done < bytes.size()) {
    const ssize_t w = ::send(fd, bytes.data() + done, bytes.size() - done, MSG_NOSIGNAL);
    if (w < 0) {
      if (errno == EINTR) continue;
      throw TransportError(errno_text("send"));
    }
    done += static_cast<std::size_t>(w);
  }
}

bool read_exact(int fd, std::span<std::uint8_t> bytes) {
  std::size_t done = 0;
  while (done < bytes.size()) {
    const ssize_t r = ::recv(fd, bytes.data() + done, bytes.size() - done, 0);
    if (r < 0) {
      if (errno == EINTR) continue;
      throw TransportError(errno_text("recv"));
    }
    if (r == 0) {
      if (done == 0) return false;
      throw TransportError("connection closed mid-frame");
    }
    done += static_cast<std::size_t>(r);
  }
  return true;
}

void close_fd(int fd) {
  if (fd >= 0) ::close(fd);
}

}  // namespace net

TcpServer::TcpServer(const Fabric& fabric, const std::string& host, std::uint16_t port)
    : fabric_(fabric), host_(host) {
  listen_fd_ = ::socket(AF_INET, SOCK_STREAM, 0);
  if (listen_fd_ < 0) throw TransportError(errno_text("socket"));
  int one = 1;
  ::setsockopt(listen_fd_, SOL_SOCKET, SO_REUSEADDR, &one, sizeof one);
  sockaddr_in addr{};
  addr.sin_family = AF_INET;
  addr.sin_port = htons(port);
  if (::inet_pton(AF_INET, host.c_str(), &addr.sin_addr) != 1) {
    ::close(listen_fd_);
    throw std::invalid_argument("tcp_serve: bind address must be dotted IPv4, got " + host);
  }
  if (::bind(listen_fd_, reinterpret_cast<sockaddr*>(&addr), sizeof addr) != 0 || ::listen(listen_fd_, 64) != 0) {
    const std::string msg = errno_text("bind/listen");
    ::close(listen_fd_);
    throw TransportError(msg);
  }
  socklen_t len = sizeof addr;
  ::getsockname(listen_fd_, reinterpret_cast<sockaddr*>(&addr), &len);
  port_ = ntohs(addr.sin_port);
  acceptor_ = std::thread([this] { accept_loop(); });
}

TcpServer::~TcpServer() { stop(); }

void TcpServer::stop() {
  if (stopping_.exchange(true)) return;
  if (acceptor_.joinable()) acceptor_.join();
  ::close(listen_fd_);
  std::vector<std::thread> workers;
  {
    std::lock_guard lock(mu_);
    for (int fd : conns_) ::shutdown(fd, SHUT_RDWR);
    workers.swap(workers_);
  }
  for (auto& t : workers) t.join();
}

void TcpServer::accept_loop() {
  while (!stopping_) {
    pollfd pfd{listen_fd_, POLLIN, 0};
    const int rc = ::poll(&pfd, 1, 50);
    if (rc <= 0) continue;
    const int fd = ::accept(listen_fd_, nullptr, nullptr);
    if (fd < 0) continue;
    set_nodelay(fd);
    std::lock_guard lock(mu_);
    if (stopping_) {
      ::close(fd);
      break;
    }
    conns_.push_back(fd);
    workers_.emplace_back([this, fd] { serve(fd); });
  }
}

void TcpServer::serve(int fd) {
  std::array<std::uint8_t, kRequestBytes> frame;
  std::vector<std::uint8_t> reply;
  try {
    while (net::read_exact(fd, frame)) {
      GetRequest req;
      try {
        req = decode_request(frame);
      } catch (const ProtocolError&) {
        ++proto_errors_;
        std::array<std::uint8_t, 9> err{};
        err[0] = static_cast<std::uint8_t>(WireStatus::Protocol);
        net::write_all(fd, err);
        break;
      }
      std::span<const std::uint64_t> data;
      WireStatus status = WireStatus::Ok;
      try {
        data = fabric_.read(req);
      } catch (const std::out_of_range&) {
        status = WireStatus::Range;
        ++range_errors_;
      }
      reply.resize(9 + 8 * data.size());
      reply[0] = static_cast<std::uint8_t>(status);
      put_le(reply.data() + 1, data.size());
      copy_payload_out(reply.data() + 9, data);
      ++served_;
      net::write_all(fd, reply);
    }
  } catch (const TransportError&) {
    // peer went away
  }
  std::lock_guard lock(mu_);
  std::erase(conns_, fd);
  ::close(fd);
}

TcpTransport::TcpTransport(std::vector<Peer> peers) : peers_(std::move(peers)), fds_(peers_.size(), -1) {
  if (peers_.empty()) throw std::invalid_argument("tcp transport: no peers");
}

TcpTransport::~TcpTransport() {
  for (int fd : fds_) net::close_fd(fd);
}

int TcpTransport::connection(NodeId target) {
  const std::size_t idx = peers_.size() == 1 ? 0 : target;
  if (idx >= peers_.size()) throw std::out_of_range("tcp transport: no peer for node " + std::to_string(target));
  if (fds_[idx] < 0) fds_[idx] = net::connect_tcp(peers_[idx]);
  return fds_[idx];
}

std::vector<std::uint64_t> TcpTransport::get(const GetRequest& req) {
  const int fd = connection(req.target);
  const std::size_t idx = peers_.size() == 1 ? 0 : req.target;
  auto drop = [&] {
    net::close_fd(fds_[idx]);
    fds_[idx] = -1;
  };
  try {
    net::write_all(fd, encode_request(req));
    std::array<std::uint8_t, 9> head;
    if (!net::read_exact(fd, head)) throw TransportError("connection closed by server");
    const auto status = static_cast<WireStatus>(head[0]);
    const std::uint64_t len = get_le(head.data() + 1);
    if (status == WireStatus::Protocol) {
      drop();
      throw ProtocolError("server rejected request frame");
    }
    if (status == WireStatus::Range) {
      if (len != 0) throw ProtocolError("range reply with payload");
      throw std::out_of_range("tcp get: request outside window");
    }
    if (status != WireStatus::Ok || len != req.length) throw ProtocolError("malformed reply header");
    std::vector<std::uint64_t> out(len);
    if constexpr (std::endian::native == std::endian::little) {
      if (len && !net::read_exact(fd, {reinterpret_cast<std::uint8_t*>(out.data()), len * 8}))
        throw TransportError("connection closed mid-reply");
    } else {
      std::vector<std::uint8_t> raw(len * 8);
      if (len && !net::read_exact(fd, raw)) throw TransportError("connection closed mid-reply");
      for (std::size_t i = 0; i < len; ++i) out[i] = get_le(raw.data() + 8 * i);
    }
    return out;
  } catch (const TransportError&) {
    drop();
    throw;
  } catch (const ProtocolError&) {
    if (fds_[idx] >= 0) drop();
    throw;
  }
}

}  // namespace tricache
