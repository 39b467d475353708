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

#pragma once

#include <cstdint>
#include <memory>
#include <span>
#include <stdexcept>
#include <string>
#include <utility>

#include "relaysim/hex.h"

namespace relaysim {

class TransportError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// Bidirectional byte stream. Close() may be called from another thread to
// unblock a pending read; the peer then observes end-of-stream.
class Stream {
 public:
  virtual ~Stream() = default;
  // Throws TransportError when the stream is closed or broken.
  virtual void WriteAll(ByteView data) = 0;
  // False on end-of-stream or transport loss before `out` is filled.
  virtual bool ReadExact(std::span<uint8_t> out) = 0;
  virtual void Close() = 0;
};

// Connected in-process stream pair.
std::pair<std::unique_ptr<Stream>, std::unique_ptr<Stream>> MakePipe();

class TcpStream : public Stream {
 public:
  explicit TcpStream(int fd);
  ~TcpStream() override;
  TcpStream(const TcpStream&) = delete;
  TcpStream& operator=(const TcpStream&) = delete;

  void WriteAll(ByteView data) override;
  bool ReadExact(std::span<uint8_t> out) override;
  void Close() override;

 private:
  int fd_;
};

std::unique_ptr<Stream> TcpConnect(const std::string& host, uint16_t port);

class TcpListener {
 public:
  // Port 0 picks an ephemeral port; see port().
  TcpListener(const std::string& host, uint16_t port);
  ~TcpListener();
  TcpListener(const TcpListener&) = delete;
  TcpListener& operator=(const TcpListener&) = delete;

  uint16_t port() const { return port_; }
  // nullptr once the listener has been closed.
  std::unique_ptr<Stream> Accept();
  void Close();

 private:
  int fd_;
  uint16_t port_ = 0;
};

// "host:port" or ":port" / "port" (host defaults to 127.0.0.1).
std::pair<std::string, uint16_t> ParseEndpoint(const std::string& text);

}  // namespace relaysim
