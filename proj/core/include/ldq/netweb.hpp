#pragma once

// A line protocol for dereferencing over TCP, a server exposing any Web
// through it, and a client-side Web that dereferences over it.
//
//   request   GET <identifier>
//   response  OK <n>, then n lines  t <s> <p> <o>   (fixture triple syntax)
//             NONE                                  (identifier not mapped)
//             ERR <reason>                          (server closes after it)
//
// Every line ends in '\n'.

#include <atomic>
#include <cstdint>
#include <memory>
#include <mutex>
#include <optional>
#include <string>
#include <string_view>
#include <thread>
#include <unordered_map>
#include <vector>

#include "ldq/terms.hpp"
#include "ldq/web.hpp"

namespace ldq {

struct Address {
  std::string host = "127.0.0.1";
  std::uint16_t port = 0;

  // "host:port" or ":port". Throws InvalidValue.
  static Address Parse(std::string_view text);
  std::string ToString() const;
};

// Pure protocol pieces, exposed for tests.
std::string FormatRequest(const Identifier& u);
// Parses one request line without its newline. Throws InvalidValue.
Identifier ParseRequest(std::string_view line);
// nullopt renders as NONE.
std::string FormatResponse(const std::optional<std::vector<Triple>>& triples);
// Parses a complete response (all of its lines). Throws TransportError.
std::optional<std::vector<Triple>> ParseResponse(std::string_view text);

// Serves `web` until Stop() or destruction. The web must outlive the
// server. Each connection gets its own thread.
class WebServer {
 public:
  // Port 0 binds an ephemeral port; see port(). Throws BindError.
  WebServer(const Web& web, const Address& listen);
  ~WebServer();
  WebServer(const WebServer&) = delete;
  WebServer& operator=(const WebServer&) = delete;

  std::uint16_t port() const { return port_; }
  void Stop();
  // Blocks until Stop() is called from elsewhere.
  void Wait();

 private:
  void AcceptLoop();
  void Serve(int fd);

  const Web& web_;
  int listen_fd_ = -1;
  std::uint16_t port_ = 0;
  std::atomic<bool> stopping_{false};
  std::thread acceptor_;
  std::mutex mu_;
  std::vector<int> client_fds_;
  std::vector<std::thread> workers_;
};

struct RemoteWebOptions {
  // Refetch on every Deref and compare with the first answer; a difference
  // raises StaticWebViolation.
  bool revalidate = false;
};

// A Web whose Deref is a GET over one sequential connection. Answers are
// cached per identifier. Received documents are named remote:<identifier>.
// Deref throws TransportError when the server cannot be reached or answers
// garbage; a lost connection is retried once.
class RemoteWeb final : public Web {
 public:
  explicit RemoteWeb(Address server, RemoteWebOptions options = {});
  ~RemoteWeb() override;

  DocumentPtr Deref(const Identifier& u) const override;
  // The set of documents cannot be listed over the protocol.
  bool IsFinite() const override { return false; }

  std::size_t requests_sent() const;

 private:
  std::optional<std::vector<Triple>> Fetch(const Identifier& u) const;
  std::optional<std::vector<Triple>> FetchOnce(const Identifier& u) const;
  void Connect() const;
  void Disconnect() const;
  std::string ReadLine() const;

  Address server_;
  RemoteWebOptions options_;
  mutable std::mutex mu_;
  mutable int fd_ = -1;
  mutable std::string inbuf_;
  mutable std::size_t requests_ = 0;
  mutable std::unordered_map<Identifier, std::optional<std::vector<Triple>>>
      answers_;
  mutable std::unordered_map<Identifier, DocumentPtr> docs_;
};

}  // namespace ldq
