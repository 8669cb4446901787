#include "ldq/netweb.hpp"

#include <arpa/inet.h>
#include <netdb.h>
#include <netinet/in.h>
#include <netinet/tcp.h>
#include <sys/socket.h>
#include <unistd.h>

#include <cerrno>
#include <charconv>
#include <cstring>

#include "ldq/errors.hpp"
#include "ldq/lexer.hpp"

namespace ldq {
namespace {

constexpr std::size_t kMaxLine = 1 << 20;

std::string Errno(const char* what) {
  return std::string(what) + ": " + std::strerror(errno);
}

bool SendAll(int fd, std::string_view data) {
  while (!data.empty()) {
    ssize_t n = ::send(fd, data.data(), data.size(), MSG_NOSIGNAL);
    if (n < 0) {
      if (errno == EINTR) continue;
      return false;
    }
    data.remove_prefix(static_cast<std::size_t>(n));
  }
  return true;
}

// Reads up to '\n' from fd via buf. nullopt on EOF/error or an overlong line.
std::optional<std::string> RecvLine(int fd, std::string& buf) {
  while (true) {
    auto nl = buf.find('\n');
    if (nl != std::string::npos) {
      std::string line = buf.substr(0, nl);
      buf.erase(0, nl + 1);
      if (!line.empty() && line.back() == '\r') line.pop_back();
      return line;
    }
    if (buf.size() > kMaxLine) return std::nullopt;
    char chunk[4096];
    ssize_t n = ::recv(fd, chunk, sizeof chunk, 0);
    if (n < 0 && errno == EINTR) continue;
    if (n <= 0) return std::nullopt;
    buf.append(chunk, static_cast<std::size_t>(n));
  }
}

std::string TripleLine(const Triple& t) {
  return "t " + t.subject.value() + " " + t.predicate.value() + " " +
         t.object.ToToken();
}

Triple ParseTripleLine(std::string_view line) {
  std::vector<Token> toks;
  try {
    toks = TokenizeLine(line, 1);
  } catch (const ParseError& e) {
    throw TransportError(std::string("bad triple line: ") + e.what());
  }
  if (toks.size() != 4 || toks[0].quoted || toks[0].text != "t") {
    throw TransportError("bad triple line '" + std::string(line) + "'");
  }
  try {
    return Triple{IdentifierFromToken(toks[1]), IdentifierFromToken(toks[2]),
                  TermFromToken(toks[3])};
  } catch (const Error& e) {
    throw TransportError(std::string("bad triple line: ") + e.what());
  }
}

std::optional<std::size_t> ParseOkCount(std::string_view line) {
  if (!line.starts_with("OK ")) return std::nullopt;
  std::string_view num = line.substr(3);
  std::size_t n = 0;
  auto [p, ec] = std::from_chars(num.data(), num.data() + num.size(), n);
  if (ec != std::errc() || p != num.data() + num.size() || num.empty()) {
    return std::nullopt;
  }
  return n;
}

}  // namespace

Address Address::Parse(std::string_view text) {
  auto colon = text.rfind(':');
  if (colon == std::string_view::npos) {
    throw InvalidValue("address '" + std::string(text) +
                       "' is not host:port");
  }
  Address a;
  if (colon > 0) a.host = std::string(text.substr(0, colon));
  std::string_view port = text.substr(colon + 1);
  unsigned value = 0;
  auto [p, ec] = std::from_chars(port.data(), port.data() + port.size(), value);
  if (port.empty() || ec != std::errc() || p != port.data() + port.size() ||
      value > 65535) {
    throw InvalidValue("bad port in address '" + std::string(text) + "'");
  }
  a.port = static_cast<std::uint16_t>(value);
  return a;
}

std::string Address::ToString() const {
  return host + ":" + std::to_string(port);
}

std::string FormatRequest(const Identifier& u) {
  return "GET " + u.value() + "\n";
}

Identifier ParseRequest(std::string_view line) {
  if (!line.starts_with("GET ")) {
    throw InvalidValue("expected 'GET <identifier>'");
  }
  std::string_view id = line.substr(4);
  if (!IsPlainToken(id)) throw InvalidValue("bad identifier");
  return Identifier(std::string(id));
}

std::string FormatResponse(const std::optional<std::vector<Triple>>& triples) {
  if (!triples) return "NONE\n";
  std::string out = "OK " + std::to_string(triples->size()) + "\n";
  for (const Triple& t : *triples) out += TripleLine(t) + "\n";
  return out;
}

std::optional<std::vector<Triple>> ParseResponse(std::string_view text) {
  auto lines = SplitLines(text);
  if (!lines.empty() && lines.back().empty()) lines.pop_back();
  if (lines.empty()) throw TransportError("empty response");
  if (lines[0] == "NONE") {
    if (lines.size() != 1) throw TransportError("trailing data after NONE");
    return std::nullopt;
  }
  auto n = ParseOkCount(lines[0]);
  if (!n) throw TransportError("bad status line '" + std::string(lines[0]) + "'");
  if (lines.size() != *n + 1) {
    throw TransportError("response announces " + std::to_string(*n) +
                         " triples but carries " +
                         std::to_string(lines.size() - 1));
  }
  std::vector<Triple> out;
  for (std::size_t i = 1; i < lines.size(); ++i) {
    out.push_back(ParseTripleLine(lines[i]));
  }
  return out;
}

// ---------------------------------------------------------------------------
// Server

WebServer::WebServer(const Web& web, const Address& listen) : web_(web) {
  addrinfo hints{};
  hints.ai_family = AF_UNSPEC;
  hints.ai_socktype = SOCK_STREAM;
  hints.ai_flags = AI_PASSIVE;
  addrinfo* res = nullptr;
  std::string port = std::to_string(listen.port);
  const char* host = listen.host.empty() ? nullptr : listen.host.c_str();
  if (int rc = ::getaddrinfo(host, port.c_str(), &hints, &res); rc != 0) {
    throw BindError("cannot resolve '" + listen.ToString() +
                    "': " + ::gai_strerror(rc));
  }
  std::string last_error = "no addresses";
  for (addrinfo* ai = res; ai; ai = ai->ai_next) {
    int fd = ::socket(ai->ai_family, ai->ai_socktype, ai->ai_protocol);
    if (fd < 0) {
      last_error = Errno("socket");
      continue;
    }
    int one = 1;
    ::setsockopt(fd, SOL_SOCKET, SO_REUSEADDR, &one, sizeof one);
    if (::bind(fd, ai->ai_addr, ai->ai_addrlen) == 0 &&
        ::listen(fd, 64) == 0) {
      listen_fd_ = fd;
      break;
    }
    last_error = Errno("bind");
    ::close(fd);
  }
  ::freeaddrinfo(res);
  if (listen_fd_ < 0) {
    throw BindError("cannot listen on '" + listen.ToString() +
                    "': " + last_error);
  }
  sockaddr_storage bound{};
  socklen_t len = sizeof bound;
  ::getsockname(listen_fd_, reinterpret_cast<sockaddr*>(&bound), &len);
  if (bound.ss_family == AF_INET6) {
    port_ = ntohs(reinterpret_cast<sockaddr_in6*>(&bound)->sin6_port);
  } else {
    port_ = ntohs(reinterpret_cast<sockaddr_in*>(&bound)->sin_port);
  }
  acceptor_ = std::thread([this] { AcceptLoop(); });
}

WebServer::~WebServer() { Stop(); }

void WebServer::Stop() {
  if (stopping_.exchange(true)) {
    if (acceptor_.joinable()) acceptor_.join();
    return;
  }
  ::shutdown(listen_fd_, SHUT_RDWR);
  if (acceptor_.joinable()) acceptor_.join();
  std::vector<std::thread> workers;
  {
    std::lock_guard lock(mu_);
    for (int fd : client_fds_) ::shutdown(fd, SHUT_RDWR);
    workers = std::move(workers_);
  }
  for (auto& t : workers) t.join();
  ::close(listen_fd_);
  stopping_.notify_all();
}

void WebServer::Wait() { stopping_.wait(false); }

void WebServer::AcceptLoop() {
  while (!stopping_) {
    int fd = ::accept(listen_fd_, nullptr, nullptr);
    if (fd < 0) {
      if (errno == EINTR) continue;
      return;
    }
    std::lock_guard lock(mu_);
    if (stopping_) {
      ::close(fd);
      return;
    }
    int one = 1;
    ::setsockopt(fd, IPPROTO_TCP, TCP_NODELAY, &one, sizeof one);
    client_fds_.push_back(fd);
    workers_.emplace_back([this, fd] { Serve(fd); });
  }
}

void WebServer::Serve(int fd) {
  std::string buf;
  while (true) {
    auto line = RecvLine(fd, buf);
    if (!line) break;
    std::string reply;
    bool close_after = false;
    try {
      Identifier u = ParseRequest(*line);
      std::optional<std::vector<Triple>> triples;
      if (DocumentPtr d = web_.Deref(u)) {
        triples.emplace(d->triples().begin(), d->triples().end());
      }
      reply = FormatResponse(triples);
    } catch (const std::exception& e) {
      std::string reason = e.what();
      for (char& c : reason) {
        if (c == '\n' || c == '\r') c = ' ';
      }
      reply = "ERR " + reason + "\n";
      close_after = true;
    }
    if (!SendAll(fd, reply) || close_after) break;
  }
  std::lock_guard lock(mu_);
  std::erase(client_fds_, fd);
  ::close(fd);
}

// ---------------------------------------------------------------------------
// Client

RemoteWeb::RemoteWeb(Address server, RemoteWebOptions options)
    : server_(std::move(server)), options_(options) {}

RemoteWeb::~RemoteWeb() {
  std::lock_guard lock(mu_);
  Disconnect();
}

std::size_t RemoteWeb::requests_sent() const {
  std::lock_guard lock(mu_);
  return requests_;
}

void RemoteWeb::Connect() const {
  addrinfo hints{};
  hints.ai_family = AF_UNSPEC;
  hints.ai_socktype = SOCK_STREAM;
  addrinfo* res = nullptr;
  std::string port = std::to_string(server_.port);
  if (int rc = ::getaddrinfo(server_.host.c_str(), port.c_str(), &hints, &res);
      rc != 0) {
    throw TransportError("cannot resolve '" + server_.ToString() +
                         "': " + ::gai_strerror(rc));
  }
  std::string last_error = "no addresses";
  for (addrinfo* ai = res; ai; ai = ai->ai_next) {
    int fd = ::socket(ai->ai_family, ai->ai_socktype, ai->ai_protocol);
    if (fd < 0) continue;
    if (::connect(fd, ai->ai_addr, ai->ai_addrlen) == 0) {
      int one = 1;
      ::setsockopt(fd, IPPROTO_TCP, TCP_NODELAY, &one, sizeof one);
      fd_ = fd;
      break;
    }
    last_error = Errno("connect");
    ::close(fd);
  }
  ::freeaddrinfo(res);
  if (fd_ < 0) {
    throw TransportError("cannot connect to '" + server_.ToString() +
                         "': " + last_error);
  }
  inbuf_.clear();
}

void RemoteWeb::Disconnect() const {
  if (fd_ >= 0) ::close(fd_);
  fd_ = -1;
  inbuf_.clear();
}

std::string RemoteWeb::ReadLine() const {
  auto line = RecvLine(fd_, inbuf_);
  if (!line) throw TransportError("connection to '" + server_.ToString() +
                                  "' closed mid-response");
  return *line;
}

std::optional<std::vector<Triple>> RemoteWeb::FetchOnce(
    const Identifier& u) const {
  if (fd_ < 0) Connect();
  ++requests_;
  if (!SendAll(fd_, FormatRequest(u))) {
    throw TransportError(Errno("send"));
  }
  std::string status = ReadLine();
  std::string text = status + "\n";
  if (status.starts_with("ERR")) {
    Disconnect();
    throw TransportError("server refused 'GET " + u.value() + "': " + status);
  }
  if (auto n = ParseOkCount(status)) {
    for (std::size_t i = 0; i < *n; ++i) text += ReadLine() + "\n";
  }
  return ParseResponse(text);
}

std::optional<std::vector<Triple>> RemoteWeb::Fetch(const Identifier& u) const {
  try {
    return FetchOnce(u);
  } catch (const TransportError&) {
    // One retry on a fresh connection: the server may have dropped an idle
    // one.
    Disconnect();
    try {
      return FetchOnce(u);
    } catch (...) {
      Disconnect();
      throw;
    }
  }
}

DocumentPtr RemoteWeb::Deref(const Identifier& u) const {
  std::lock_guard lock(mu_);
  auto cached = answers_.find(u);
  if (cached != answers_.end() && !options_.revalidate) {
    auto d = docs_.find(u);
    return d == docs_.end() ? nullptr : d->second;
  }
  auto answer = Fetch(u);
  if (cached != answers_.end()) {
    if (answer != cached->second) {
      throw StaticWebViolation("server answered differently for '" +
                               u.value() + "' than before");
    }
  } else {
    answers_.emplace(u, answer);
    if (answer) {
      docs_.emplace(u, std::make_shared<const Document>(
                           DocumentId("remote:" + u.value()), *answer));
    }
  }
  auto d = docs_.find(u);
  return d == docs_.end() ? nullptr : d->second;
}

}  // namespace ldq
