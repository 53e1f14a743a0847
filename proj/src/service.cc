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

#include "gramwb/service.h"

#include <httplib.h>

#include <functional>
#include <map>
#include <mutex>

namespace gramwb {
namespace {

using json = nlohmann::json;

int StatusFor(const std::string& code) {
  if (code == "session-not-found" || code == "job-not-found" || code == "no-baseline" ||
      code == "not-found") {
    return 404;
  }
  if (code == "malformed-request" || code == "bad-field") return 400;
  if (code == "internal") return 500;
  return 422;
}

void Reply(httplib::Response& res, int status, const json& body) {
  res.status = status;
  res.set_content(body.dump(), "application/json; charset=utf-8");
}

void ReplyError(httplib::Response& res, const std::string& code, const std::string& message) {
  Reply(res, StatusFor(code), {{"error", {{"code", code}, {"message", message}}}});
}

json Body(const httplib::Request& req) {
  if (req.body.empty()) return json::object();
  json j = json::parse(req.body, nullptr, false);
  if (j.is_discarded() || !j.is_object()) {
    throw Error("malformed-request", "request body must be a JSON object");
  }
  return j;
}

template <typename T>
T Field(const json& body, const char* name) {
  if (!body.contains(name)) throw Error("bad-field", std::string("missing field '") + name + "'");
  try {
    return body.at(name).get<T>();
  } catch (const json::exception&) {
    throw Error("bad-field", std::string("field '") + name + "' has the wrong type");
  }
}

template <typename T>
T FieldOr(const json& body, const char* name, T fallback) {
  return body.contains(name) ? Field<T>(body, name) : fallback;
}

std::set<std::string> SplitList(const std::string& s) {
  std::set<std::string> out;
  std::size_t start = 0;
  while (start <= s.size()) {
    std::size_t comma = s.find(',', start);
    if (comma == std::string::npos) comma = s.size();
    if (comma > start) out.insert(s.substr(start, comma - start));
    start = comma + 1;
  }
  return out;
}

// "*" or a list of labels.
TraceFilter FilterFrom(const json& body) {
  if (!body.contains("labels")) return TraceFilter{};
  const json& labels = body["labels"];
  if (labels.is_string() && labels.get<std::string>() == "*") return TraceFilter::All();
  if (!labels.is_array()) throw Error("bad-field", "labels must be \"*\" or a list");
  return TraceFilter{false, labels.get<std::set<std::string>>()};
}

json FilterToJson(const TraceFilter& f) {
  if (f.all) return "*";
  return f.labels;
}

json WfstToJson(const Wfst& w) {
  json entries = json::array();
  for (const auto& [key, entry] : w) {
    json solutions = json::array();
    for (const auto& s : entry.solutions) {
      solutions.push_back({{"end", s.end}, {"seq", s.seq}, {"features", Render(s.features)},
                           {"tree", TreeToJson(s.tree)}});
    }
    entries.push_back({{"category", key.first},
                       {"start", key.second},
                       {"complete", entry.complete},
                       {"solutions", std::move(solutions)}});
  }
  return entries;
}

std::string SseEvent(const std::string& name, const json& data) {
  return "event: " + name + "\ndata: " + data.dump() + "\n\n";
}

}  // namespace

struct Service::Impl {
  explicit Impl(Config c) : sessions(c), store(c.store_dir) {}

  SessionManager sessions;
  BaselineStore store;
  httplib::Server server;

  std::mutex jobs_mu;
  std::uint64_t next_job = 0;
  std::map<std::string, std::pair<std::string, std::shared_ptr<ParseJob>>> parse_jobs;
  std::map<std::string, std::pair<std::string, std::shared_ptr<SuiteJob>>> suite_jobs;

  using Handler = std::function<json(const httplib::Request&, httplib::Response&)>;

  // Errors become structured replies; successful payloads are returned as-is.
  void Route(const char* method, const std::string& pattern, Handler h) {
    auto wrapped = [this, h](const httplib::Request& req, httplib::Response& res) {
      sessions.expire();
      try {
        json body = h(req, res);
        if (!body.is_null()) Reply(res, 200, body);
      } catch (const Error& e) {
        ReplyError(res, e.kind(), e.what());
      } catch (const std::exception& e) {
        ReplyError(res, "internal", e.what());
      }
    };
    std::string path = std::string(kApiPrefix) + pattern;
    std::string m(method);
    if (m == "GET") server.Get(path, wrapped);
    else if (m == "POST") server.Post(path, wrapped);
    else if (m == "DELETE") server.Delete(path, wrapped);
  }

  std::shared_ptr<Session> SessionOf(const httplib::Request& req) {
    return sessions.get(req.path_params.at("sid"));
  }

  static json Envelope(const Session& s, json payload = json::object()) {
    payload["session"] = s.id();
    payload["fingerprint"] = s.fingerprint();
    return payload;
  }

  std::string NewJobId() {
    std::lock_guard<std::mutex> lock(jobs_mu);
    return "j" + std::to_string(++next_job);
  }

  template <typename Job>
  std::shared_ptr<Job> FindJob(std::map<std::string, std::pair<std::string, std::shared_ptr<Job>>>& jobs,
                               const httplib::Request& req) {
    std::lock_guard<std::mutex> lock(jobs_mu);
    auto it = jobs.find(req.path_params.at("jid"));
    if (it == jobs.end() || it->second.first != req.path_params.at("sid")) {
      throw Error("job-not-found", "no job '" + req.path_params.at("jid") + "'");
    }
    return it->second.second;
  }

  LoadReport Load(Session& s, const json& body,
                  LoadReport (Session::*from_text)(std::string_view, std::string_view),
                  LoadReport (Session::*from_file)(const std::string&)) {
    if (body.contains("path")) return (s.*from_file)(Field<std::string>(body, "path"));
    return (s.*from_text)(Field<std::string>(body, "text"),
                          FieldOr<std::string>(body, "source", "request"));
  }

  json SessionState(const Session& s) {
    auto g = s.grammar();
    json j = {{"engine", EngineName(s.engine())},
              {"trace", FilterToJson(s.trace_filter())},
              {"breakpoints", s.breakpoints()},
              {"grammar", g ? json(g->source) : json(nullptr)},
              {"formalism", g ? json(FormalismName(g->grammar.formalism)) : json(nullptr)},
              {"lexicon_loaded", !s.lexicon().empty()}};
    return Envelope(s, std::move(j));
  }

  json JobStatus(const std::string& id, const ParseJob& job) {
    json j = {{"job", id}, {"done", job.done()}, {"events", job.event_count()}};
    auto paused = const_cast<ParseJob&>(job).controller().paused_at();
    j["paused_at"] = paused ? TraceEventToJson(*paused) : json(nullptr);
    auto outcome = job.outcome();
    j["outcome"] = outcome ? ParseOutcomeToJson(*outcome) : json(nullptr);
    j["error"] = job.error();
    return j;
  }

  void Install() {
    Route("GET", "/health", [](auto&, auto&) { return json{{"status", "ok"}}; });
    Route("GET", "/config", [this](auto&, auto&) { return ConfigToJson(sessions.config()); });

    Route("POST", "/sessions", [this](auto&, auto&) {
      auto s = sessions.create();
      return SessionState(*s);
    });
    Route("GET", "/sessions/:sid", [this](auto& req, auto&) { return SessionState(*SessionOf(req)); });
    Route("DELETE", "/sessions/:sid", [this](auto& req, auto&) {
      auto s = SessionOf(req);
      json out = Envelope(*s, {{"deleted", true}});
      sessions.remove(s->id());
      return out;
    });

    Route("POST", "/sessions/:sid/grammar", [this](auto& req, auto&) {
      auto s = SessionOf(req);
      LoadReport r = Load(*s, Body(req), &Session::load_grammar, &Session::load_grammar_file);
      json out = LoadReportToJson(r);
      out["engine"] = EngineName(s->engine());
      return Envelope(*s, std::move(out));
    });
    Route("POST", "/sessions/:sid/lexicon", [this](auto& req, auto&) {
      auto s = SessionOf(req);
      return Envelope(*s, LoadReportToJson(Load(*s, Body(req), &Session::load_lexicon,
                                                &Session::load_lexicon_file)));
    });
    Route("POST", "/sessions/:sid/rules", [this](auto& req, auto&) {
      auto s = SessionOf(req);
      return Envelope(*s, LoadReportToJson(Load(*s, Body(req), &Session::load_interface_rules,
                                                &Session::load_interface_rules_file)));
    });
    Route("GET", "/sessions/:sid/check", [this](auto& req, auto&) {
      auto s = SessionOf(req);
      return Envelope(*s, CheckReportToJson(s->check()));
    });
    Route("GET", "/sessions/:sid/index", [this](auto& req, auto&) {
      auto s = SessionOf(req);
      auto g = s->grammar();
      if (!g) throw Error("no-grammar", "no grammar loaded");
      return Envelope(*s, {{"index", GrammarIndexToJson(g->grammar)}});
    });
    Route("POST", "/sessions/:sid/engine", [this](auto& req, auto&) {
      auto s = SessionOf(req);
      std::string name = Field<std::string>(Body(req), "engine");
      auto e = ParseEngine(name);
      if (!e) throw Error("bad-field", "engine must be chart or td");
      s->set_engine(*e);
      return SessionState(*s);
    });
    Route("POST", "/sessions/:sid/trace", [this](auto& req, auto&) {
      auto s = SessionOf(req);
      json body = Body(req);
      s->set_trace(FilterFrom(body),
                   FieldOr<std::set<std::string>>(body, "breakpoints", {}));
      return SessionState(*s);
    });

    Route("POST", "/sessions/:sid/parse", [this](auto& req, auto&) {
      auto s = SessionOf(req);
      json body = Body(req);
      ParseOptions options;
      if (body.contains("engine")) {
        auto e = ParseEngine(Field<std::string>(body, "engine"));
        if (!e) throw Error("bad-field", "engine must be chart or td");
        options.engine = e;
      }
      options.memo = FieldOr<bool>(body, "memo", true);
      if (body.contains("labels")) options.trace = FilterFrom(body);
      auto o = s->parse_and_keep(Field<std::string>(body, "sentence"), options);
      json out = ParseOutcomeToJson(*o);
      if (body.contains("format")) {
        auto f = ParseOutputFormat(Field<std::string>(body, "format"));
        if (!f) throw Error("bad-field", "format must be tree, features or json");
        out["output"] = RenderParse(*o, *f);
      }
      return Envelope(*s, std::move(out));
    });

    Route("GET", "/sessions/:sid/chart", [this](auto& req, auto&) {
      auto s = SessionOf(req);
      auto o = s->last();
      if (!o) throw Error("no-parse", "no parse in this session yet");
      if (o->wfst) return Envelope(*s, {{"engine", "td"}, {"wfst", WfstToJson(*o->wfst)}});
      ChartTraceFilter filter;
      if (req.has_param("labels")) filter.labels = SplitList(req.get_param_value("labels"));
      if (req.has_param("from") && req.has_param("to")) {
        filter.span = std::make_pair(std::stoul(req.get_param_value("from")),
                                     std::stoul(req.get_param_value("to")));
      }
      json edges = json::array();
      for (const ChartEdge* e : ChartTrace(*o->chart, filter)) edges.push_back(EdgeToJson(*e));
      return Envelope(*s, {{"engine", "chart"},
                           {"tokens", o->chart->tokens()},
                           {"truncated", o->chart->truncated()},
                           {"edges", std::move(edges)}});
    });
    Route("GET", "/sessions/:sid/fragments", [this](auto& req, auto&) {
      auto s = SessionOf(req);
      auto o = s->last();
      if (!o) throw Error("no-parse", "no parse in this session yet");
      FailureReport f = o->failure ? *o->failure : DiagnoseFailure(o->spans(), o->lexical.tokens);
      json out = FailureToJson(f);
      out["readings"] = o->result.readings.size();
      return Envelope(*s, std::move(out));
    });
    Route("POST", "/sessions/:sid/compare", [this](auto& req, auto&) {
      auto s = SessionOf(req);
      json body = Body(req);
      if (body.contains("old")) {
        ParseResult a = ResultFromJson(Field<json>(body, "old"));
        ParseResult b = ResultFromJson(Field<json>(body, "new"));
        return Envelope(*s, ComparisonToJson(CompareResults(a, b)));
      }
      auto ids = Field<std::vector<std::size_t>>(body, "readings");
      auto o = s->last();
      if (!o) throw Error("no-parse", "no parse in this session yet");
      const auto& rs = o->result.readings;
      if (ids.size() != 2 || ids[0] >= rs.size() || ids[1] >= rs.size()) {
        throw Error("bad-field", "readings must name two readings of the last parse");
      }
      return Envelope(*s, ReportToJson(CompareTrees(rs[ids[0]].tree, rs[ids[1]].tree)));
    });

    // Steerable top-down parses.
    Route("POST", "/sessions/:sid/trace-jobs", [this](auto& req, auto&) {
      auto s = SessionOf(req);
      json body = Body(req);
      std::string mode = FieldOr<std::string>(body, "mode", "run");
      if (mode != "run" && mode != "step") throw Error("bad-field", "mode must be run or step");
      ParseOptions options;
      options.engine = EngineKind::kTopDown;
      options.memo = FieldOr<bool>(body, "memo", true);
      TraceFilter filter = body.contains("labels") ? FilterFrom(body) : s->trace_filter();
      auto breakpoints = FieldOr<std::set<std::string>>(body, "breakpoints", s->breakpoints());
      auto job = ParseJob::Start(s, Field<std::string>(body, "sentence"), options, filter,
                                 breakpoints, mode == "step" ? TraceMode::kStep : TraceMode::kRun);
      std::string id = NewJobId();
      {
        std::lock_guard<std::mutex> lock(jobs_mu);
        parse_jobs[id] = {s->id(), job};
      }
      return Envelope(*s, {{"job", id}});
    });
    Route("GET", "/sessions/:sid/trace-jobs/:jid", [this](auto& req, auto&) {
      auto s = SessionOf(req);
      auto job = FindJob(parse_jobs, req);
      return Envelope(*s, JobStatus(req.path_params.at("jid"), *job));
    });
    Route("POST", "/sessions/:sid/trace-jobs/:jid/control", [this](auto& req, auto&) {
      auto s = SessionOf(req);
      auto job = FindJob(parse_jobs, req);
      json body = Body(req);
      if (body.contains("breakpoints")) {
        job->controller().set_breakpoints(Field<std::set<std::string>>(body, "breakpoints"));
      }
      std::string action = Field<std::string>(body, "action");
      if (action == "resume") job->controller().resume(TraceMode::kRun);
      else if (action == "step") job->controller().resume(TraceMode::kStep);
      else if (action == "abort") job->controller().abort();
      else if (action != "none") throw Error("bad-field", "action must be resume, step, abort or none");
      if (FieldOr<bool>(body, "wait", false)) {
        job->controller().wait_for_pause(std::chrono::milliseconds(5000));
      }
      return Envelope(*s, JobStatus(req.path_params.at("jid"), *job));
    });
    Route("GET", "/sessions/:sid/trace-jobs/:jid/events", [this](auto& req, auto& res) {
      auto s = SessionOf(req);
      auto job = FindJob(parse_jobs, req);
      auto cursor = std::make_shared<std::size_t>(0);
      auto last_pause = std::make_shared<std::optional<std::size_t>>();
      std::string sid = s->id();
      res.set_chunked_content_provider(
          "text/event-stream", [job, cursor, last_pause, sid](std::size_t, httplib::DataSink& sink) {
            for (const auto& e : job->events(*cursor, std::chrono::milliseconds(200))) {
              std::string chunk = SseEvent("trace", TraceEventToJson(e));
              if (!sink.write(chunk.data(), chunk.size())) return false;
              ++*cursor;
            }
            auto paused = job->controller().paused_at();
            if (paused && *last_pause != paused->goal) {
              *last_pause = paused->goal;
              std::string chunk = SseEvent("paused", TraceEventToJson(*paused));
              if (!sink.write(chunk.data(), chunk.size())) return false;
            }
            if (!paused) last_pause->reset();
            if (job->done() && *cursor >= job->event_count()) {
              auto o = job->outcome();
              json done = {{"session", sid}, {"error", job->error()}};
              done["outcome"] = o ? ParseOutcomeToJson(*o) : json(nullptr);
              std::string chunk = SseEvent("done", done);
              sink.write(chunk.data(), chunk.size());
              sink.done();
            }
            return true;
          });
      return json();
    });

    // Background suite sweeps.
    Route("POST", "/sessions/:sid/suite-runs", [this](auto& req, auto&) {
      auto s = SessionOf(req);
      json body = Body(req);
      auto dirs = FieldOr<std::vector<std::string>>(body, "dirs", sessions.config().suite_dirs);
      if (dirs.empty()) throw Error("bad-field", "no suite directories given or configured");
      std::vector<TestClass> classes;
      json warnings = json::array();
      for (const auto& d : dirs) {
        SuiteLoad l = LoadSuiteDirectory(d);
        for (const auto& diag : l.diagnostics) warnings.push_back(DiagnosticToJson(diag));
        for (auto& c : l.classes) classes.push_back(std::move(c));
      }
      std::vector<Diagnostic> select_warnings;
      auto cases = SelectCases(classes, FieldOr<std::set<std::string>>(body, "tags", {}),
                               &select_warnings);
      for (const auto& diag : select_warnings) warnings.push_back(DiagnosticToJson(diag));
      std::optional<EngineKind> engine;
      if (body.contains("engine")) {
        engine = ParseEngine(Field<std::string>(body, "engine"));
        if (!engine) throw Error("bad-field", "engine must be chart or td");
      }
      SuiteOptions options;
      options.workers = FieldOr<std::size_t>(body, "workers", sessions.config().workers);
      options.fingerprint = s->fingerprint();
      if (FieldOr<bool>(body, "compare", false)) options.compare_to = &store;
      if (FieldOr<bool>(body, "save", false)) options.save_to = &store;
      auto job = SuiteJob::Start(std::move(cases), s->sentence_parser(engine), options);
      std::string id = NewJobId();
      {
        std::lock_guard<std::mutex> lock(jobs_mu);
        suite_jobs[id] = {s->id(), job};
      }
      return Envelope(*s, {{"job", id}, {"total", job->total()}, {"warnings", warnings}});
    });
    Route("GET", "/sessions/:sid/suite-runs/:jid", [this](auto& req, auto&) {
      auto s = SessionOf(req);
      auto job = FindJob(suite_jobs, req);
      json out = {{"job", req.path_params.at("jid")}, {"done", job->done()}, {"total", job->total()}};
      out["table"] = job->done() ? SuiteTableToJson(job->wait()) : json(nullptr);
      return Envelope(*s, std::move(out));
    });
    Route("DELETE", "/sessions/:sid/suite-runs/:jid", [this](auto& req, auto&) {
      auto s = SessionOf(req);
      FindJob(suite_jobs, req)->cancel();
      return Envelope(*s, {{"cancelled", true}});
    });
    Route("GET", "/sessions/:sid/suite-runs/:jid/events", [this](auto& req, auto& res) {
      auto s = SessionOf(req);
      auto job = FindJob(suite_jobs, req);
      auto cursor = std::make_shared<std::size_t>(0);
      std::string sid = s->id();
      std::string fingerprint = s->fingerprint();
      res.set_chunked_content_provider(
          "text/event-stream", [job, cursor, sid, fingerprint](std::size_t, httplib::DataSink& sink) {
            for (const auto& row : job->progress(*cursor, std::chrono::milliseconds(200))) {
              ++*cursor;
              json p = {{"done", *cursor}, {"total", job->total()}, {"row", SuiteRowToJson(row)}};
              std::string chunk = SseEvent("progress", p);
              if (!sink.write(chunk.data(), chunk.size())) return false;
            }
            if (job->done() && *cursor >= job->total()) {
              json done = {{"session", sid}, {"fingerprint", fingerprint},
                           {"table", SuiteTableToJson(job->wait())}};
              std::string chunk = SseEvent("done", done);
              sink.write(chunk.data(), chunk.size());
              sink.done();
            }
            return true;
          });
      return json();
    });

    // Baselines.
    Route("POST", "/sessions/:sid/baselines/save", [this](auto& req, auto&) {
      auto s = SessionOf(req);
      auto o = s->parse_and_keep(Field<std::string>(Body(req), "sentence"));
      store.save(o->result);
      return Envelope(*s, {{"saved", true},
                           {"path", store.path_for(o->result.sentence)},
                           {"readings", o->result.readings.size()}});
    });
    Route("POST", "/sessions/:sid/baselines/compare", [this](auto& req, auto&) {
      auto s = SessionOf(req);
      auto o = s->parse_and_keep(Field<std::string>(Body(req), "sentence"));
      LoadedBaseline b = store.load(o->result.sentence, s->fingerprint());
      json out = ComparisonToJson(CompareResults(b.result, o->result));
      out["warnings"] = b.warnings;
      out["text"] = FormatComparison(CompareResults(b.result, o->result));
      return Envelope(*s, std::move(out));
    });
    Route("GET", "/sessions/:sid/baselines", [this](auto& req, auto&) {
      auto s = SessionOf(req);
      if (!req.has_param("sentence")) throw Error("bad-field", "missing query parameter 'sentence'");
      LoadedBaseline b = store.load(req.get_param_value("sentence"), s->fingerprint());
      return Envelope(*s, {{"result", ResultToJson(b.result)}, {"warnings", b.warnings}});
    });

    server.set_error_handler([](const httplib::Request& req, httplib::Response& res) {
      if (res.body.empty() && res.status == 404) {
        ReplyError(res, "not-found", "no endpoint " + req.method + " " + req.path);
      }
    });
  }
};

Service::Service(Config config) : impl_(std::make_unique<Impl>(std::move(config))) {
  impl_->Install();
}

Service::~Service() { stop(); }

int Service::start(const std::string& host, int port) {
  if (port < 0) port = impl_->sessions.config().port;
  if (port == 0) {
    port_ = impl_->server.bind_to_any_port(host);
  } else {
    port_ = impl_->server.bind_to_port(host, port) ? port : -1;
  }
  if (port_ < 0) return -1;
  thread_ = std::thread([this] { impl_->server.listen_after_bind(); });
  impl_->server.wait_until_ready();
  return port_;
}

bool Service::run(const std::string& host, int port) {
  if (port < 0) port = impl_->sessions.config().port;
  port_ = port;
  return impl_->server.listen(host, port);
}

void Service::stop() {
  impl_->server.stop();
  if (thread_.joinable()) thread_.join();
  std::lock_guard<std::mutex> lock(impl_->jobs_mu);
  impl_->parse_jobs.clear();
  impl_->suite_jobs.clear();
}

SessionManager& Service::sessions() { return impl_->sessions; }

}  // namespace gramwb
