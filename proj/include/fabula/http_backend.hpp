#pragma once

// Remote parser backend.  Posts one JSON request per sentence:
//
//   { "sentence":   "Mary moved to the bathroom.",
//     "prompt":     "...few-shot prompt with the sentence inlined...",
//     "predicates": ["be","go_to", ...],
//     "exemplars":  [["John went to the hallway.","go_to(john,hallway)"], ...] }
//
// and expects  { "parse": "go_to(mary,bathroom)" }  back.  Replies
// are validated by parse_sentence like any other backend output, and
// invalid ones are retried.
//
// Kept out of parse_backend.hpp so that builds without a remote
// parser do not pull in the HTTP client library.

#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

#include "parse_backend.hpp"

#if __has_include(<nlohmann/json.hpp>)
#include <nlohmann/json.hpp>
#else
#include "json.hpp"
#endif
#if __has_include("httplib.h")
#include "httplib.h"
#else
#include <httplib.h>
#endif

namespace fabula {

struct HttpBackendConfig {
  std::string endpoint;  // http://host:port/path
  int retries = 2;
  int timeout_seconds = 60;
  std::vector<std::pair<std::string, std::string>> exemplars = {
      {"Mary moved to the bathroom.", "go_to(mary,bathroom)"},
      {"John went to the hallway.", "go_to(john,hallway)"},
      {"Where is Daniel?", "be(daniel,V1)"},
  };
};

class HttpBackend : public ParserBackend {
 public:
  HttpBackend(HttpBackendConfig config, const Lexicon& lex)
      : config_(std::move(config)), lex_(lex) {
    const std::string& url = config_.endpoint;
    size_t scheme = url.find("://");
    if (scheme == std::string::npos) {
      throw ParseBackendError("endpoint must look like http://host:port/path, got " + url);
    }
    size_t host_start = scheme + 3;
    size_t path_start = url.find('/', host_start);
    base_ = url.substr(0, path_start == std::string::npos ? url.size() : path_start);
    path_ = path_start == std::string::npos ? "/" : url.substr(path_start);
  }

  std::string parse(const Sentence& s) override {
    nlohmann::json req;
    req["sentence"] = s.text;
    req["prompt"] = parser_prompt(lex_.predicates(), config_.exemplars, s.text);
    req["predicates"] = lex_.predicates();
    nlohmann::json ex = nlohmann::json::array();
    for (const auto& [text, parse] : config_.exemplars) {
      ex.push_back({text, parse});
    }
    req["exemplars"] = ex;

    httplib::Client client(base_);
    client.set_read_timeout(config_.timeout_seconds, 0);
    client.set_connection_timeout(config_.timeout_seconds, 0);
    auto res = client.Post(path_, req.dump(), "application/json");
    if (!res) {
      throw ParseBackendError("no response from " + config_.endpoint + ": " +
                              httplib::to_string(res.error()));
    }
    if (res->status != 200) {
      throw ParseBackendError("parser endpoint returned status " + std::to_string(res->status));
    }
    nlohmann::json body;
    try {
      body = nlohmann::json::parse(res->body);
    } catch (const nlohmann::json::exception& e) {
      throw ParseBackendError(std::string("parser reply is not JSON: ") + e.what());
    }
    if (!body.contains("parse") || !body["parse"].is_string()) {
      throw ParseBackendError("parser reply lacks a string 'parse' field");
    }
    return body["parse"].get<std::string>();
  }

  int retries() const override { return config_.retries; }

 private:
  HttpBackendConfig config_;
  const Lexicon& lex_;
  std::string base_;
  std::string path_;
};

}  // namespace fabula
