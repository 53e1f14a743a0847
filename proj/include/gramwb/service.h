// Copyright 2026 The gramwb Authors.
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

// Local JSON service under /api/v1. The protocol is documented in
// docs/protocol.md.

#ifndef GRAMWB_SERVICE_H_
#define GRAMWB_SERVICE_H_

#include <memory>
#include <string>
#include <thread>

#include "gramwb/workbench.h"

namespace gramwb {

inline constexpr std::string_view kApiPrefix = "/api/v1";

class Service {
 public:
  explicit Service(Config config);
  ~Service();

  Service(const Service&) = delete;
  Service& operator=(const Service&) = delete;

  // Binds `port` (0: any free port) on `host` and serves on a background
  // thread. Returns the bound port, or -1.
  int start(const std::string& host = "127.0.0.1", int port = -1);
  // Serves on the calling thread until stop().
  bool run(const std::string& host = "127.0.0.1", int port = -1);
  void stop();

  int port() const { return port_; }
  SessionManager& sessions();

 private:
  struct Impl;
  std::unique_ptr<Impl> impl_;
  std::thread thread_;
  int port_ = -1;
};

}  // namespace gramwb

#endif  // GRAMWB_SERVICE_H_
