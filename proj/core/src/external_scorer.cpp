// Copyright 2026 The taxcode Authors
// SPDX-License-Identifier: Apache-2.0

#include "taxcode/external_scorer.hpp"

#include <poll.h>
#include <signal.h>
#include <spawn.h>
#include <sys/socket.h>
#include <sys/wait.h>
#include <unistd.h>

#include <cerrno>
#include <cstring>
#include <thread>

#include "json.hpp"

extern char** environ;

namespace taxcode {

namespace {

constexpr std::size_t kMaxLineBytes = 64u << 20;

void reap(int& fd, pid_t& pid) {
  if (fd >= 0) {
    ::close(fd);
    fd = -1;
  }
  if (pid > 0) {
    // Closing the socket gives the child EOF on stdin; allow it a moment to
    // exit before killing it.
    for (int i = 0; i < 50; ++i) {
      if (::waitpid(pid, nullptr, WNOHANG) == pid) {
        pid = -1;
        return;
      }
      std::this_thread::sleep_for(std::chrono::milliseconds(10));
    }
    ::kill(pid, SIGKILL);
    ::waitpid(pid, nullptr, 0);
    pid = -1;
  }
}

}  // namespace

ExternalScorer::ExternalScorer(ExternalScorerOptions options) : options_(std::move(options)) {
  if (options_.command.empty()) {
    throw Error(ErrorCode::kScorerUnavailable, "empty scorer command");
  }
  int sv[2];
  if (::socketpair(AF_UNIX, SOCK_STREAM | SOCK_CLOEXEC, 0, sv) != 0) {
    throw Error(ErrorCode::kScorerUnavailable,
                std::string("socketpair failed: ") + std::strerror(errno));
  }

  posix_spawn_file_actions_t actions;
  posix_spawn_file_actions_init(&actions);
  posix_spawn_file_actions_adddup2(&actions, sv[1], STDIN_FILENO);
  posix_spawn_file_actions_adddup2(&actions, sv[1], STDOUT_FILENO);

  std::string shell = "/bin/sh";
  std::string dash_c = "-c";
  char* argv[] = {shell.data(), dash_c.data(), options_.command.data(), nullptr};
  const int rc = ::posix_spawn(&pid_, shell.c_str(), &actions, nullptr, argv, environ);
  posix_spawn_file_actions_destroy(&actions);
  ::close(sv[1]);
  fd_ = sv[0];
  if (rc != 0) {
    pid_ = -1;
    reap(fd_, pid_);
    throw Error(ErrorCode::kScorerUnavailable,
                "cannot start '" + options_.command + "': " + std::strerror(rc));
  }

  try {
    send_line(R"({"hello":1})");
    const std::string reply = read_line();
    nlohmann::json doc;
    try {
      doc = nlohmann::json::parse(reply);
    } catch (const nlohmann::json::exception&) {
      fail(ErrorCode::kProtocolError, "handshake reply is not JSON: " + reply);
    }
    if (!doc.is_object() || !doc.contains("hello") || doc["hello"] != 1) {
      fail(ErrorCode::kProtocolError, "unexpected handshake reply: " + reply);
    }
  } catch (...) {
    reap(fd_, pid_);
    throw;
  }
}

ExternalScorer::~ExternalScorer() { reap(fd_, pid_); }

void ExternalScorer::fail(ErrorCode code, const std::string& message) const {
  broken_ = true;
  throw Error(code, "external scorer: " + message);
}

void ExternalScorer::send_line(const std::string& line) const {
  std::string data = line;
  data.push_back('\n');
  std::size_t sent = 0;
  while (sent < data.size()) {
    const ssize_t n = ::send(fd_, data.data() + sent, data.size() - sent, MSG_NOSIGNAL);
    if (n < 0) {
      if (errno == EINTR) continue;
      fail(ErrorCode::kScorerUnavailable, std::string("write failed: ") + std::strerror(errno));
    }
    sent += static_cast<std::size_t>(n);
  }
}

std::string ExternalScorer::read_line() const {
  const auto deadline = std::chrono::steady_clock::now() + options_.timeout;
  while (true) {
    const auto newline = buffer_.find('\n');
    if (newline != std::string::npos) {
      std::string line = buffer_.substr(0, newline);
      buffer_.erase(0, newline + 1);
      if (!line.empty() && line.back() == '\r') line.pop_back();
      return line;
    }
    if (buffer_.size() > kMaxLineBytes) fail(ErrorCode::kProtocolError, "reply line too long");

    const auto remaining = std::chrono::duration_cast<std::chrono::milliseconds>(
        deadline - std::chrono::steady_clock::now());
    if (remaining.count() <= 0) {
      fail(ErrorCode::kTimeout, "no reply within " + std::to_string(options_.timeout.count()) + " ms");
    }
    pollfd pfd{fd_, POLLIN, 0};
    const int ready = ::poll(&pfd, 1, static_cast<int>(remaining.count()));
    if (ready < 0) {
      if (errno == EINTR) continue;
      fail(ErrorCode::kScorerUnavailable, std::string("poll failed: ") + std::strerror(errno));
    }
    if (ready == 0) continue;  // deadline check above reports the timeout

    char chunk[4096];
    const ssize_t n = ::read(fd_, chunk, sizeof chunk);
    if (n < 0) {
      if (errno == EINTR || errno == EAGAIN) continue;
      fail(ErrorCode::kScorerUnavailable, std::string("read failed: ") + std::strerror(errno));
    }
    if (n == 0) fail(ErrorCode::kScorerUnavailable, "process closed its output");
    buffer_.append(chunk, static_cast<std::size_t>(n));
  }
}

ScoreResponse ExternalScorer::score(const ScoreRequest& request) const {
  std::lock_guard lock(mutex_);
  if (broken_) throw Error(ErrorCode::kScorerUnavailable, "external scorer is no longer usable");

  const std::int64_t id = next_id_++;
  nlohmann::ordered_json req;
  req["id"] = id;
  req["input"] = std::string(request.input_text);
  req["kind"] = std::string(kind_name(request.kind));
  auto& prefix = req["prefix"] = nlohmann::ordered_json::array();
  for (const auto& s : request.prefix) prefix.push_back(s.digits());
  auto& candidates = req["candidates"] = nlohmann::ordered_json::array();
  for (const auto& s : request.candidates) candidates.push_back(s.digits());
  send_line(req.dump());

  const std::string reply = read_line();
  nlohmann::json doc;
  try {
    doc = nlohmann::json::parse(reply);
  } catch (const nlohmann::json::exception&) {
    fail(ErrorCode::kProtocolError, "reply is not JSON: " + reply);
  }
  if (!doc.is_object() || !doc.contains("id") || !doc["id"].is_number_integer() ||
      doc["id"].get<std::int64_t>() != id) {
    fail(ErrorCode::kProtocolError, "reply id does not match request " + std::to_string(id));
  }
  if (!doc.contains("weights") || !doc["weights"].is_array()) {
    fail(ErrorCode::kProtocolError, "reply has no weights array");
  }
  ScoreResponse response;
  for (const auto& w : doc["weights"]) {
    if (!w.is_number()) fail(ErrorCode::kProtocolError, "non-numeric weight in reply");
    response.weights.push_back(w.get<double>());
  }
  try {
    validate_response(request, response);
  } catch (const Error& e) {
    fail(e.code(), e.what());
  }
  return response;
}

}  // namespace taxcode
