/*
 * Copyright 2026 The irkit Authors.
 *
 * Licensed under the Apache License, Version 2.0 (the "License");
 * you may not use this file except in compliance with the License.
 * You may obtain a copy of the License at
 *
 *     https://www.apache.org/licenses/LICENSE-2.0
 *
 * Unless required by applicable law or agreed to in writing, software
 * distributed under the License is distributed on an "AS IS" BASIS,
 * WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
 * See the License for the specific language governing permissions and
 * limitations under the License.
 */

// Subprocess client for the newline-delimited JSON black-box protocol.

#include <fcntl.h>
#include <poll.h>
#include <signal.h>
#include <sys/wait.h>
#include <unistd.h>

#include <cerrno>
#include <cstring>
#include <thread>

#include "irkit/core/blackbox.h"
#include "irkit/core/encoding.h"
#include "irkit/core/error.h"
#include "json.hpp"

namespace irkit {

using Clock = std::chrono::steady_clock;

class ExternalBlackBox::Process {
 public:
  explicit Process(const std::string& command) {
    ::signal(SIGPIPE, SIG_IGN);
    int in_pipe[2], out_pipe[2], err_pipe[2];
    if (::pipe(in_pipe) != 0 || ::pipe(out_pipe) != 0 || ::pipe(err_pipe) != 0) {
      throw BackendError(std::string("pipe() failed: ") + std::strerror(errno));
    }
    pid_ = ::fork();
    if (pid_ < 0) {
      throw BackendError(std::string("fork() failed: ") + std::strerror(errno));
    }
    if (pid_ == 0) {
      ::setpgid(0, 0);
      ::dup2(in_pipe[0], STDIN_FILENO);
      ::dup2(out_pipe[1], STDOUT_FILENO);
      ::dup2(err_pipe[1], STDERR_FILENO);
      for (const int fd : {in_pipe[0], in_pipe[1], out_pipe[0], out_pipe[1],
                           err_pipe[0], err_pipe[1]}) {
        ::close(fd);
      }
      ::execl("/bin/sh", "sh", "-c", command.c_str(), static_cast<char*>(nullptr));
      ::_exit(127);
    }
    ::close(in_pipe[0]);
    ::close(out_pipe[1]);
    ::close(err_pipe[1]);
    stdin_fd_ = in_pipe[1];
    stdout_fd_ = out_pipe[0];
    stderr_fd_ = err_pipe[0];
    ::fcntl(stdin_fd_, F_SETFD, FD_CLOEXEC);
    ::fcntl(stdout_fd_, F_SETFD, FD_CLOEXEC);
    ::fcntl(stderr_fd_, F_SETFD, FD_CLOEXEC);
    stderr_thread_ = std::thread([this] { drain_stderr(); });
  }

  ~Process() {
    if (stdin_fd_ >= 0) ::close(stdin_fd_);
    // Give a well-behaved child a moment to exit on EOF, then kill it.
    bool exited = false;
    for (int i = 0; i < 20 && !exited; ++i) {
      exited = ::waitpid(pid_, nullptr, WNOHANG) == pid_;
      if (!exited) std::this_thread::sleep_for(std::chrono::milliseconds(5));
    }
    if (!exited) {
      ::kill(-pid_, SIGKILL);
      ::kill(pid_, SIGKILL);
      ::waitpid(pid_, nullptr, 0);
    }
    if (stdout_fd_ >= 0) ::close(stdout_fd_);
    if (stderr_thread_.joinable()) stderr_thread_.join();
    if (stderr_fd_ >= 0) ::close(stderr_fd_);
  }

  void write_line(const std::string& line) {
    std::string data = line + "\n";
    std::size_t off = 0;
    while (off < data.size()) {
      const ssize_t n = ::write(stdin_fd_, data.data() + off, data.size() - off);
      if (n < 0) {
        if (errno == EINTR) continue;
        throw BackendError("black box closed its input: " +
                               std::string(std::strerror(errno)),
                           stderr_excerpt());
      }
      off += static_cast<std::size_t>(n);
    }
  }

  std::string read_line(std::chrono::milliseconds timeout) {
    const auto deadline = Clock::now() + timeout;
    while (true) {
      if (const auto pos = buffer_.find('\n'); pos != std::string::npos) {
        std::string line = buffer_.substr(0, pos);
        buffer_.erase(0, pos + 1);
        if (!line.empty() && line.back() == '\r') line.pop_back();
        return line;
      }
      const auto remaining = std::chrono::duration_cast<std::chrono::milliseconds>(
          deadline - Clock::now());
      if (remaining.count() <= 0) {
        throw BackendError("black box timed out after " +
                               std::to_string(timeout.count()) + " ms",
                           stderr_excerpt());
      }
      pollfd pfd{stdout_fd_, POLLIN, 0};
      const int r = ::poll(&pfd, 1, static_cast<int>(remaining.count()));
      if (r < 0 && errno == EINTR) continue;
      if (r == 0) continue;
      char chunk[65536];
      const ssize_t n = ::read(stdout_fd_, chunk, sizeof(chunk));
      if (n < 0 && errno == EINTR) continue;
      if (n <= 0) {
        // Let the stderr reader catch up with the dying child.
        std::this_thread::sleep_for(std::chrono::milliseconds(20));
        throw BackendError("black box exited unexpectedly", stderr_excerpt());
      }
      buffer_.append(chunk, static_cast<std::size_t>(n));
    }
  }

  std::string stderr_excerpt() {
    std::lock_guard<std::mutex> lock(stderr_mutex_);
    return stderr_tail_;
  }

 private:
  void drain_stderr() {
    char chunk[4096];
    while (true) {
      const ssize_t n = ::read(stderr_fd_, chunk, sizeof(chunk));
      if (n < 0 && errno == EINTR) continue;
      if (n <= 0) return;
      std::lock_guard<std::mutex> lock(stderr_mutex_);
      stderr_tail_.append(chunk, static_cast<std::size_t>(n));
      constexpr std::size_t kKeep = 4096;
      if (stderr_tail_.size() > kKeep) {
        stderr_tail_.erase(0, stderr_tail_.size() - kKeep);
      }
    }
  }

  pid_t pid_ = -1;
  int stdin_fd_ = -1;
  int stdout_fd_ = -1;
  int stderr_fd_ = -1;
  std::string buffer_;
  std::thread stderr_thread_;
  std::mutex stderr_mutex_;
  std::string stderr_tail_;
};

ExternalBlackBox::ExternalBlackBox(std::string command, ExternalOptions options)
    : command_(std::move(command)), options_(options) {
  process_ = std::make_unique<Process>(command_);
  const std::string line = process_->read_line(options_.timeout);
  nlohmann::json hello;
  try {
    hello = nlohmann::json::parse(line);
  } catch (const nlohmann::json::exception& e) {
    throw ProtocolError("malformed handshake '" + line + "'",
                        process_->stderr_excerpt());
  }
  if (!hello.is_object() || !hello.contains("classes") ||
      !hello["classes"].is_number_integer() || hello["classes"].get<long>() < 1) {
    throw ProtocolError("handshake must be {\"classes\": <int >= 1>}, got '" +
                            line + "'",
                        process_->stderr_excerpt());
  }
  classes_ = hello["classes"].get<std::size_t>();
}

ExternalBlackBox::~ExternalBlackBox() = default;

ProbabilityMatrix ExternalBlackBox::round_trip(const std::string& request_line,
                                               std::size_t rows) {
  process_->write_line(request_line);
  const std::string line = process_->read_line(options_.timeout);
  nlohmann::json response;
  try {
    response = nlohmann::json::parse(line);
  } catch (const nlohmann::json::exception&) {
    throw ProtocolError("malformed response '" + line.substr(0, 200) + "'",
                        process_->stderr_excerpt());
  }
  if (!response.is_object() || !response.contains("id") ||
      response["id"] != next_id_ || !response.contains("probabilities") ||
      !response["probabilities"].is_array()) {
    throw ProtocolError("response does not match request id " +
                            std::to_string(next_id_),
                        process_->stderr_excerpt());
  }
  ProbabilityMatrix out;
  try {
    out = response["probabilities"].get<ProbabilityMatrix>();
  } catch (const nlohmann::json::exception&) {
    throw ProtocolError("probabilities must be a matrix of numbers",
                        process_->stderr_excerpt());
  }
  check_probabilities(out, rows, classes_);
  return out;
}

ProbabilityMatrix ExternalBlackBox::do_predict(const std::vector<Instance>& batch) {
  std::lock_guard<std::mutex> lock(mutex_);
  ++next_id_;
  nlohmann::json request = {{"id", next_id_},
                            {"mode", "tabular"},
                            {"instances", batch}};
  return round_trip(request.dump(), batch.size());
}

ProbabilityMatrix ExternalBlackBox::do_predict_images(
    const std::vector<image::Image>& batch) {
  std::lock_guard<std::mutex> lock(mutex_);
  ++next_id_;
  nlohmann::json instances = nlohmann::json::array();
  for (const auto& img : batch) {
    instances.push_back(base64_encode(image::encode_png(img)));
  }
  nlohmann::json request = {{"id", next_id_},
                            {"mode", "image"},
                            {"instances", std::move(instances)}};
  return round_trip(request.dump(), batch.size());
}

}  // namespace irkit
