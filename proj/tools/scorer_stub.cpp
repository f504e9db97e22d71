// Copyright 2026 The taxcode Authors
// SPDX-License-Identifier: Apache-2.0

// Test double for the external scorer protocol. Reads one JSON request per
// line and answers according to the mode given as the first argument:
//
//   uniform   weight 1 for every candidate
//   negative  weight -1 for every candidate
//   garbage   a line that is not JSON
//   die       exit right after the handshake
//   wrong-id  echo id + 1
//   slow      sleep 2 s before every reply

#include <chrono>
#include <iostream>
#include <string>
#include <thread>

#include "json.hpp"

int main(int argc, char** argv) {
  const std::string mode = argc > 1 ? argv[1] : "uniform";
  std::string line;
  if (!std::getline(std::cin, line)) return 1;
  std::cout << R"({"hello":1})" << std::endl;
  if (mode == "die") return 0;

  while (std::getline(std::cin, line)) {
    const auto req = nlohmann::json::parse(line, nullptr, false);
    if (req.is_discarded()) return 1;
    if (mode == "garbage") {
      std::cout << "this is not json" << std::endl;
      continue;
    }
    if (mode == "slow") std::this_thread::sleep_for(std::chrono::seconds(2));
    nlohmann::json reply;
    reply["id"] = mode == "wrong-id" ? req["id"].get<long long>() + 1 : req["id"].get<long long>();
    auto& weights = reply["weights"] = nlohmann::json::array();
    for (std::size_t i = 0; i < req["candidates"].size(); ++i) {
      weights.push_back(mode == "negative" ? -1.0 : 1.0);
    }
    std::cout << reply.dump() << std::endl;
  }
  return 0;
}
