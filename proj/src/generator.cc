// Copyright 2026 The evseq Authors.
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//      http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#include "evseq/generator.h"

#include <sys/socket.h>
#include <sys/un.h>
#include <unistd.h>

#include <cerrno>
#include <cmath>
#include <cstdlib>
#include <cstring>
#include <istream>
#include <ostream>
#include <thread>

#include "evseq/error.h"

namespace evseq {

using nlohmann::json;

GenerationRequest parse_request(const json& j) {
  if (!j.is_object()) throw RequestError("request must be a JSON object");
  GenerationRequest r;
  try {
    auto model = parse_model_kind(j.at("model").get<std::string>());
    if (!model) throw RequestError("unknown model '" + j["model"].get<std::string>() + "'");
    r.model = *model;
    auto flavor = parse_flavor(j.at("flavor").get<std::string>());
    if (!flavor) throw RequestError("unknown flavor '" + j["flavor"].get<std::string>() + "'");
    r.flavor = *flavor;
    const json& history = j.at("history");
    if (history.is_string()) {
      if (!history.get<std::string>().empty()) {
        throw RequestError("history must be an array or the empty string");
      }
    } else if (history.is_array()) {
      for (const auto& t : history) r.history.emplace_back(t.get<std::string>());
    } else {
      throw RequestError("history must be an array or the empty string");
    }
    const json& length = j.at("length");
    if (!length.is_number_integer()) throw RequestError("length must be an integer");
    const auto n = length.get<std::int64_t>();
    if (n < 1) throw RequestError("length must be positive");
    if (n > 1'000'000) throw RequestError("length too large");
    r.length = static_cast<int>(n);
    if (j.contains("seed")) {
      if (!j["seed"].is_number_unsigned()) {
        throw RequestError("seed must be an unsigned integer");
      }
      r.seed = j["seed"].get<std::uint64_t>();
    }
    if (j.contains("lambda")) {
      r.lambda = j["lambda"].get<double>();
      if (!(r.lambda >= 0.0 && r.lambda <= 1.0)) throw RequestError("lambda must lie in [0, 1]");
    }
  } catch (const json::exception& e) {
    throw RequestError(std::string("bad request: ") + e.what());
  }
  return r;
}

json to_json(const GenerationRequest& r) {
  json j;
  j["model"] = std::string(to_string(r.model));
  j["flavor"] = std::string(to_string(r.flavor));
  json history = json::array();
  for (const auto& t : r.history) history.push_back(t.text());
  j["history"] = std::move(history);
  j["length"] = r.length;
  if (r.seed) j["seed"] = *r.seed;
  if (r.flavor == Flavor::kStrange) j["lambda"] = r.lambda;
  return j;
}

json to_json(const GenerationResponse& r) {
  json j;
  json tokens = json::array();
  for (const auto& t : r.tokens) tokens.push_back(t.text());
  j["tokens"] = std::move(tokens);
  j["logprobs"] = r.logprobs;
  j["error"] = nullptr;
  return j;
}

GenerationResponse parse_response(const json& j) {
  if (j.contains("error") && !j["error"].is_null()) {
    throw RequestError(j["error"].get<std::string>());
  }
  GenerationResponse r;
  for (const auto& t : j.at("tokens")) r.tokens.emplace_back(t.get<std::string>());
  r.logprobs = j.at("logprobs").get<std::vector<double>>();
  return r;
}

GenerationResponse generate_sequence(const LanguageModel& model, const FlavorConfig& flavor,
                                     std::span<const EventToken> history, int length, Rng& rng) {
  if (length < 1) throw RequestError("length must be positive");
  for (const auto& t : history) {
    if (t.is_start()) throw RequestError("history may not contain the start marker");
    if (!model.vocabulary().contains(t)) {
      throw RequestError("history token not in vocabulary: " + t.text());
    }
  }
  const std::size_t width = static_cast<std::size_t>(model.order() - 1);
  std::vector<EventToken> window(history.end() - std::min(width, history.size()), history.end());

  GenerationResponse out;
  out.tokens.reserve(length);
  out.logprobs.reserve(length);
  for (int i = 0; i < length; ++i) {
    EventToken next = sample(model, flavor, window, rng);
    out.logprobs.push_back(std::log(model.prob(next, window)));
    window.push_back(next);
    if (window.size() > width) window.erase(window.begin());
    out.tokens.push_back(std::move(next));
  }
  return out;
}

GenerationResponse SequenceGenerator::handle(const GenerationRequest& req) const {
  std::uint64_t seed;
  if (req.seed) {
    seed = *req.seed;
  } else {
    GenerationRequest unseeded = req;
    seed = mix_seed(default_seed_, hash_string(to_json(unseeded).dump()));
  }
  Rng rng(seed);
  const FlavorConfig cfg = FlavorConfig::of(req.flavor, req.lambda, seed);
  return generate_sequence(models_->get(req.model), cfg, req.history, req.length, rng);
}

std::string SequenceGenerator::handle_line(const std::string& line) const {
  try {
    json j = json::parse(line);
    return to_json(handle(parse_request(j))).dump();
  } catch (const std::exception& e) {
    json err;
    err["tokens"] = json::array();
    err["logprobs"] = json::array();
    err["error"] = e.what();
    return err.dump();
  }
}

void SequenceGenerator::serve(std::istream& in, std::ostream& out) const {
  std::string line;
  while (std::getline(in, line)) {
    if (line.find_first_not_of(" \t\r") == std::string::npos) continue;
    out << handle_line(line) << '\n';
    out.flush();
  }
}

namespace {

void serve_connection(const SequenceGenerator& gen, int fd) {
  std::string buffer;
  char chunk[4096];
  while (true) {
    const ssize_t n = ::read(fd, chunk, sizeof chunk);
    if (n <= 0) break;
    buffer.append(chunk, static_cast<std::size_t>(n));
    std::size_t pos;
    while ((pos = buffer.find('\n')) != std::string::npos) {
      std::string line = buffer.substr(0, pos);
      buffer.erase(0, pos + 1);
      if (line.find_first_not_of(" \t\r") == std::string::npos) continue;
      std::string reply = gen.handle_line(line) + "\n";
      const char* p = reply.data();
      std::size_t left = reply.size();
      while (left > 0) {
        const ssize_t w = ::write(fd, p, left);
        if (w <= 0) {
          ::close(fd);
          return;
        }
        p += w;
        left -= static_cast<std::size_t>(w);
      }
    }
  }
  ::close(fd);
}

}  // namespace

void SequenceGenerator::serve_unix_socket(const std::string& path, int max_connections) const {
  const int listener = ::socket(AF_UNIX, SOCK_STREAM, 0);
  if (listener < 0) throw Error(std::string("socket: ") + std::strerror(errno));
  sockaddr_un addr{};
  addr.sun_family = AF_UNIX;
  if (path.size() >= sizeof addr.sun_path) {
    ::close(listener);
    throw Error("socket path too long: " + path);
  }
  std::strncpy(addr.sun_path, path.c_str(), sizeof addr.sun_path - 1);
  ::unlink(path.c_str());
  if (::bind(listener, reinterpret_cast<sockaddr*>(&addr), sizeof addr) < 0 ||
      ::listen(listener, 16) < 0) {
    const std::string msg = std::strerror(errno);
    ::close(listener);
    throw Error("cannot listen on " + path + ": " + msg);
  }
  std::vector<std::thread> workers;
  for (int served = 0; max_connections == 0 || served < max_connections; ++served) {
    const int fd = ::accept(listener, nullptr, nullptr);
    if (fd < 0) {
      if (errno == EINTR) continue;
      break;
    }
    workers.emplace_back(serve_connection, std::cref(*this), fd);
  }
  for (auto& w : workers) w.join();
  ::close(listener);
  ::unlink(path.c_str());
}

std::uint64_t default_seed_from_env(std::uint64_t fallback) {
  const char* v = std::getenv("EVSEQ_SEED");
  if (v == nullptr || *v == '\0') return fallback;
  char* end = nullptr;
  const unsigned long long parsed = std::strtoull(v, &end, 10);
  if (end == v || *end != '\0') throw Error("EVSEQ_SEED must be an unsigned integer");
  return parsed;
}

}  // namespace evseq
