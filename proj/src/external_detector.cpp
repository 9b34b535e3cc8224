#include <fcntl.h>
#include <netdb.h>
#include <poll.h>
#include <signal.h>
#include <sys/socket.h>
#include <sys/wait.h>
#include <unistd.h>

#include <chrono>
#include <cstdio>
#include <cstring>
#include <utility>

#include "daa/json_codec.hpp"
#include "daa/perception.hpp"

namespace daa {

namespace {

using json = nlohmann::json;

[[noreturn]] void throw_errno(const std::string& what) {
  throw PerceptionError(what + ": " + std::strerror(errno));
}

// Blocking line transport with a poll-based read deadline.
class LineChannel {
 public:
  virtual ~LineChannel() = default;

  void write_line(const std::string& line) {
    std::string payload = line;
    payload.push_back('\n');
    std::size_t off = 0;
    while (off < payload.size()) {
      const ssize_t n = ::write(write_fd(), payload.data() + off, payload.size() - off);
      if (n < 0) {
        if (errno == EINTR) continue;
        throw_errno("detector write failed");
      }
      off += static_cast<std::size_t>(n);
    }
  }

  std::string read_line(int timeout_ms) {
    const auto deadline =
        std::chrono::steady_clock::now() + std::chrono::milliseconds(timeout_ms);
    for (;;) {
      if (const auto pos = buf_.find('\n'); pos != std::string::npos) {
        std::string line = buf_.substr(0, pos);
        buf_.erase(0, pos + 1);
        return line;
      }
      const auto remaining = std::chrono::duration_cast<std::chrono::milliseconds>(
          deadline - std::chrono::steady_clock::now());
      if (remaining.count() <= 0) {
        throw PerceptionError("detector response timed out");
      }
      pollfd pfd{read_fd(), POLLIN, 0};
      const int pr = ::poll(&pfd, 1, static_cast<int>(remaining.count()));
      if (pr < 0) {
        if (errno == EINTR) continue;
        throw_errno("detector poll failed");
      }
      if (pr == 0) throw PerceptionError("detector response timed out");
      char chunk[4096];
      const ssize_t n = ::read(read_fd(), chunk, sizeof(chunk));
      if (n < 0) {
        if (errno == EINTR) continue;
        throw_errno("detector read failed");
      }
      if (n == 0) throw PerceptionError("detector closed the connection");
      buf_.append(chunk, static_cast<std::size_t>(n));
    }
  }

 protected:
  virtual int read_fd() const = 0;
  virtual int write_fd() const = 0;

 private:
  std::string buf_;
};

class ChildProcessChannel final : public LineChannel {
 public:
  explicit ChildProcessChannel(const std::string& command) {
    int to_child[2], from_child[2];
    if (::pipe(to_child) != 0) throw_errno("pipe failed");
    if (::pipe(from_child) != 0) {
      ::close(to_child[0]);
      ::close(to_child[1]);
      throw_errno("pipe failed");
    }
    pid_ = ::fork();
    if (pid_ < 0) throw_errno("fork failed");
    if (pid_ == 0) {
      // Own process group so teardown reaches the whole command, not just
      // the wrapping shell.
      ::setpgid(0, 0);
      ::dup2(to_child[0], STDIN_FILENO);
      ::dup2(from_child[1], STDOUT_FILENO);
      ::close(to_child[0]);
      ::close(to_child[1]);
      ::close(from_child[0]);
      ::close(from_child[1]);
      ::execl("/bin/sh", "sh", "-c", command.c_str(), nullptr);
      std::perror("exec failed");
      _exit(127);
    }
    ::setpgid(pid_, pid_);  // either side may win the race
    ::close(to_child[0]);
    ::close(from_child[1]);
    in_ = to_child[1];
    out_ = from_child[0];
  }

  ~ChildProcessChannel() override {
    if (in_ >= 0) ::close(in_);
    if (out_ >= 0) ::close(out_);
    if (pid_ > 0) {
      int status = 0;
      // Closing stdin asks the command to exit; escalate if it lingers.
      if (::waitpid(pid_, &status, WNOHANG) == 0) {
        ::kill(-pid_, SIGTERM);
        for (int i = 0; i < 50 && ::waitpid(pid_, &status, WNOHANG) == 0; ++i) {
          ::usleep(10000);
        }
        if (::waitpid(pid_, &status, WNOHANG) == 0) {
          ::kill(-pid_, SIGKILL);
          ::waitpid(pid_, &status, 0);
        }
      }
      ::kill(-pid_, SIGKILL);  // sweep any stragglers in the group
    }
  }

 protected:
  int read_fd() const override { return out_; }
  int write_fd() const override { return in_; }

 private:
  pid_t pid_ = -1;
  int in_ = -1;
  int out_ = -1;
};

class TcpChannel final : public LineChannel {
 public:
  TcpChannel(const std::string& host, const std::string& port) {
    addrinfo hints{};
    hints.ai_family = AF_UNSPEC;
    hints.ai_socktype = SOCK_STREAM;
    addrinfo* res = nullptr;
    if (::getaddrinfo(host.c_str(), port.c_str(), &hints, &res) != 0) {
      throw PerceptionError("cannot resolve detector endpoint " + host + ":" + port);
    }
    int last_errno = 0;
    for (addrinfo* p = res; p != nullptr; p = p->ai_next) {
      fd_ = ::socket(p->ai_family, p->ai_socktype, p->ai_protocol);
      if (fd_ < 0) {
        last_errno = errno;
        continue;
      }
      if (::connect(fd_, p->ai_addr, p->ai_addrlen) == 0) break;
      last_errno = errno;
      ::close(fd_);
      fd_ = -1;
    }
    ::freeaddrinfo(res);
    if (fd_ < 0) {
      throw PerceptionError("cannot connect to detector " + host + ":" + port + ": " +
                            std::strerror(last_errno));
    }
  }

  ~TcpChannel() override {
    if (fd_ >= 0) ::close(fd_);
  }

 protected:
  int read_fd() const override { return fd_; }
  int write_fd() const override { return fd_; }

 private:
  int fd_ = -1;
};

std::unique_ptr<LineChannel> open_channel(const std::string& spec) {
  constexpr const char* kTcpPrefix = "tcp://";
  if (spec.rfind(kTcpPrefix, 0) == 0) {
    const std::string rest = spec.substr(std::strlen(kTcpPrefix));
    const auto colon = rest.rfind(':');
    if (colon == std::string::npos) {
      throw PerceptionError("tcp endpoint must be tcp://host:port, got " + spec);
    }
    return std::make_unique<TcpChannel>(rest.substr(0, colon), rest.substr(colon + 1));
  }
  if (spec.empty()) throw PerceptionError("empty detector endpoint");
  return std::make_unique<ChildProcessChannel>(spec);
}

std::string truncate_line(const std::string& s) {
  return s.size() <= 200 ? s : s.substr(0, 200) + "...";
}

class ExternalPerception final : public Perception {
 public:
  ExternalPerception(const CameraModel& cam, const ClassTable& classes,
                     DetectorEndpoint endpoint)
      : cam_(cam), classes_(classes), endpoint_(std::move(endpoint)) {}

  std::optional<IntruderEstimate> perceive(const AircraftState& own,
                                           const AircraftState& intr,
                                           const Conditions& cond, Rng&) override {
    (void)intr;  // truth intruder state is never sent to the detector
    try {
      return query(own, cond);
    } catch (const PerceptionError& e) {
      if (endpoint_.hard_fail) throw;
      if (!warned_) {
        std::fprintf(stderr, "warning: external detector: %s (treating as undetected)\n",
                     e.what());
        warned_ = true;
      }
      return std::nullopt;
    }
  }

  std::unique_ptr<Perception> clone() const override {
    // Each clone opens its own endpoint, one per batch worker.
    return std::make_unique<ExternalPerception>(cam_, classes_, endpoint_);
  }
  const char* name() const override { return "external"; }

 private:
  std::optional<IntruderEstimate> query(const AircraftState& own,
                                        const Conditions& cond) {
    if (!channel_) channel_ = open_channel(endpoint_.spec);
    const int id = next_id_++;
    json req = {{"id", id},
                {"scene", {{"ownship", own}}},
                {"camera",
                 {{"hfovDeg", cam_.hfov_deg},
                  {"imageWidth", cam_.image_width},
                  {"imageHeight", cam_.image_height}}}};
    channel_->write_line(req.dump());
    const std::string line = channel_->read_line(endpoint_.timeout_ms);

    json resp;
    try {
      resp = json::parse(line);
    } catch (const json::exception&) {
      throw PerceptionError("malformed detector response: " + truncate_line(line));
    }
    if (!resp.is_object() || !resp.contains("id") || !resp.contains("boxes") ||
        !resp["boxes"].is_array()) {
      throw PerceptionError("detector response missing id/boxes: " +
                            truncate_line(line));
    }
    if (resp["id"].get<int>() != id) {
      throw PerceptionError("detector response id mismatch: " + truncate_line(line));
    }
    if (resp["boxes"].empty()) return std::nullopt;

    BoundingBox best;
    double best_conf = -1.0;
    for (const auto& jb : resp["boxes"]) {
      BoundingBox b;
      try {
        b = jb.get<BoundingBox>();
      } catch (const json::exception&) {
        throw PerceptionError("malformed detector box: " + truncate_line(line));
      }
      if (b.confidence > best_conf) {
        best_conf = b.confidence;
        best = b;
      }
    }
    if (!(best.width > 0.0)) {
      throw PerceptionError("detector returned a degenerate box: " +
                            truncate_line(line));
    }
    const AircraftClass& cls = class_for(classes_, cond.aircraft);
    IntruderEstimate est;
    est.rel = estimate_state_from_box(cam_, best, cls, own);
    est.detected_box = best;
    est.source = PerceptionSource::External;
    return est;
  }

  CameraModel cam_;
  ClassTable classes_;
  DetectorEndpoint endpoint_;
  std::unique_ptr<LineChannel> channel_;
  int next_id_ = 0;
  bool warned_ = false;
};

}  // namespace

std::unique_ptr<Perception> make_external_perception(const CameraModel& cam,
                                                     const ClassTable& classes,
                                                     DetectorEndpoint endpoint) {
  return std::make_unique<ExternalPerception>(cam, classes, std::move(endpoint));
}

}  // namespace daa
