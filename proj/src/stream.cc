/*
 * Copyright (C) 2026 The relaysim Authors
 *
 * Licensed under the Apache License, Version 2.0 (the "License");
 * you may not use this file except in compliance with the License.
 * You may obtain a copy of the License at
 *
 *      http://www.apache.org/licenses/LICENSE-2.0
 *
 * Unless required by applicable law or agreed to in writing, software
 * distributed under the License is distributed on an "AS IS" BASIS,
 * WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
 * See the License for the specific language governing permissions and
 * limitations under the License.
 */

#include "relaysim/stream.h"

#include <arpa/inet.h>
#include <netdb.h>
#include <netinet/in.h>
#include <netinet/tcp.h>
#include <sys/socket.h>
#include <unistd.h>

#include <cerrno>
#include <condition_variable>
#include <cstring>
#include <deque>
#include <mutex>

namespace relaysim {

namespace {

struct PipeBuffer {
  std::deque<uint8_t> bytes;
  bool closed = false;
};

struct PipeShared {
  std::mutex mu;
  std::condition_variable cv;
  PipeBuffer a_to_b;
  PipeBuffer b_to_a;
};

class PipeStream : public Stream {
 public:
  PipeStream(std::shared_ptr<PipeShared> shared, bool is_a)
      : shared_(std::move(shared)), is_a_(is_a) {}
  ~PipeStream() override { Close(); }

  void WriteAll(ByteView data) override {
    std::lock_guard<std::mutex> lock(shared_->mu);
    PipeBuffer& out = outgoing();
    if (out.closed || incoming().closed) {
      throw TransportError("pipe closed");
    }
    out.bytes.insert(out.bytes.end(), data.begin(), data.end());
    shared_->cv.notify_all();
  }

  bool ReadExact(std::span<uint8_t> out) override {
    std::unique_lock<std::mutex> lock(shared_->mu);
    PipeBuffer& in = incoming();
    shared_->cv.wait(lock, [&] {
      return in.bytes.size() >= out.size() || in.closed || outgoing().closed;
    });
    if (in.bytes.size() < out.size()) return false;
    std::copy_n(in.bytes.begin(), out.size(), out.begin());
    in.bytes.erase(in.bytes.begin(), in.bytes.begin() + out.size());
    return true;
  }

  void Close() override {
    std::lock_guard<std::mutex> lock(shared_->mu);
    outgoing().closed = true;
    shared_->cv.notify_all();
  }

 private:
  PipeBuffer& outgoing() { return is_a_ ? shared_->a_to_b : shared_->b_to_a; }
  PipeBuffer& incoming() { return is_a_ ? shared_->b_to_a : shared_->a_to_b; }

  std::shared_ptr<PipeShared> shared_;
  bool is_a_;
};

sockaddr_in ResolveIpv4(const std::string& host, uint16_t port) {
  sockaddr_in addr{};
  addr.sin_family = AF_INET;
  addr.sin_port = htons(port);
  const std::string name = host.empty() || host == "localhost" ? "127.0.0.1" : host;
  if (inet_pton(AF_INET, name.c_str(), &addr.sin_addr) == 1) return addr;

  addrinfo hints{};
  hints.ai_family = AF_INET;
  hints.ai_socktype = SOCK_STREAM;
  addrinfo* result = nullptr;
  if (getaddrinfo(name.c_str(), nullptr, &hints, &result) != 0 || !result) {
    throw TransportError("cannot resolve host " + host);
  }
  addr.sin_addr = reinterpret_cast<sockaddr_in*>(result->ai_addr)->sin_addr;
  freeaddrinfo(result);
  return addr;
}

std::string Errno(const char* what) {
  return std::string(what) + ": " + std::strerror(errno);
}

}  // namespace

std::pair<std::unique_ptr<Stream>, std::unique_ptr<Stream>> MakePipe() {
  auto shared = std::make_shared<PipeShared>();
  return {std::make_unique<PipeStream>(shared, true),
          std::make_unique<PipeStream>(shared, false)};
}

TcpStream::TcpStream(int fd) : fd_(fd) {
  int one = 1;
  setsockopt(fd_, IPPROTO_TCP, TCP_NODELAY, &one, sizeof(one));
}

TcpStream::~TcpStream() {
  Close();
  if (fd_ >= 0) ::close(fd_);
}

void TcpStream::WriteAll(ByteView data) {
  size_t sent = 0;
  while (sent < data.size()) {
    ssize_t n = ::send(fd_, data.data() + sent, data.size() - sent, MSG_NOSIGNAL);
    if (n < 0 && errno == EINTR) continue;
    if (n <= 0) throw TransportError(Errno("send"));
    sent += static_cast<size_t>(n);
  }
}

bool TcpStream::ReadExact(std::span<uint8_t> out) {
  size_t got = 0;
  while (got < out.size()) {
    ssize_t n = ::recv(fd_, out.data() + got, out.size() - got, 0);
    if (n < 0 && errno == EINTR) continue;
    if (n <= 0) return false;
    got += static_cast<size_t>(n);
  }
  return true;
}

void TcpStream::Close() {
  if (fd_ >= 0) ::shutdown(fd_, SHUT_RDWR);
}

std::unique_ptr<Stream> TcpConnect(const std::string& host, uint16_t port) {
  sockaddr_in addr = ResolveIpv4(host, port);
  int fd = ::socket(AF_INET, SOCK_STREAM, 0);
  if (fd < 0) throw TransportError(Errno("socket"));
  if (::connect(fd, reinterpret_cast<sockaddr*>(&addr), sizeof(addr)) != 0) {
    std::string msg = Errno("connect");
    ::close(fd);
    throw TransportError(msg);
  }
  return std::make_unique<TcpStream>(fd);
}

TcpListener::TcpListener(const std::string& host, uint16_t port) {
  sockaddr_in addr = ResolveIpv4(host, port);
  fd_ = ::socket(AF_INET, SOCK_STREAM, 0);
  if (fd_ < 0) throw TransportError(Errno("socket"));
  int one = 1;
  setsockopt(fd_, SOL_SOCKET, SO_REUSEADDR, &one, sizeof(one));
  if (::bind(fd_, reinterpret_cast<sockaddr*>(&addr), sizeof(addr)) != 0 ||
      ::listen(fd_, 4) != 0) {
    std::string msg = Errno("bind/listen");
    ::close(fd_);
    throw TransportError(msg);
  }
  socklen_t len = sizeof(addr);
  getsockname(fd_, reinterpret_cast<sockaddr*>(&addr), &len);
  port_ = ntohs(addr.sin_port);
}

TcpListener::~TcpListener() {
  Close();
  ::close(fd_);
}

std::unique_ptr<Stream> TcpListener::Accept() {
  while (true) {
    int fd = ::accept(fd_, nullptr, nullptr);
    if (fd >= 0) return std::make_unique<TcpStream>(fd);
    if (errno == EINTR) continue;
    return nullptr;
  }
}

void TcpListener::Close() { ::shutdown(fd_, SHUT_RDWR); }

std::pair<std::string, uint16_t> ParseEndpoint(const std::string& text) {
  std::string host = "127.0.0.1";
  std::string port_text = text;
  if (auto colon = text.rfind(':'); colon != std::string::npos) {
    if (colon > 0) host = text.substr(0, colon);
    port_text = text.substr(colon + 1);
  }
  size_t pos = 0;
  unsigned long port = 0;
  try {
    port = std::stoul(port_text, &pos);
  } catch (const std::exception&) {
    pos = 0;
  }
  if (pos == 0 || pos != port_text.size() || port > 65535) {
    throw std::invalid_argument("bad endpoint '" + text + "'");
  }
  return {host, static_cast<uint16_t>(port)};
}

}  // namespace relaysim
