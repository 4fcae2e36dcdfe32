#include "lotto/http_backend.hpp"

#include <httplib.h>

#include <json.hpp>

#include "lotto/errors.hpp"

namespace lotto {

namespace {

using nlohmann::json;

struct Endpoint {
  std::string origin;  // scheme://host:port
  std::string prefix;  // path prefix without trailing slash
};

Endpoint SplitUrl(const std::string& url) {
  const auto scheme = url.find("://");
  if (scheme == std::string::npos) {
    throw Error(ErrorCode::kInvalidArgument, "backend URL '" + url + "' lacks a scheme (expected http://host:port)");
  }
  if (url.compare(0, scheme, "http") != 0) {
    throw Error(ErrorCode::kInvalidArgument, "backend URL '" + url + "': only http:// is supported");
  }
  const auto path = url.find('/', scheme + 3);
  Endpoint ep;
  ep.origin = url.substr(0, path);
  if (path != std::string::npos) {
    ep.prefix = url.substr(path);
    while (!ep.prefix.empty() && ep.prefix.back() == '/') ep.prefix.pop_back();
  }
  return ep;
}

httplib::Client MakeClient(const Endpoint& ep, const HttpBackendOptions& options) {
  httplib::Client client(ep.origin);
  client.set_connection_timeout(options.connect_timeout);
  client.set_read_timeout(options.read_timeout);
  client.set_write_timeout(options.read_timeout);
  return client;
}

[[noreturn]] void TransportFailure(const std::string& url, httplib::Error err) {
  throw Error(ErrorCode::kBackendUnavailable, url + ": " + httplib::to_string(err));
}

json ParseBody(const std::string& url, const std::string& body) {
  try {
    return json::parse(body);
  } catch (const json::exception& e) {
    throw Error(ErrorCode::kProtocolError, url + ": response is not JSON: " + e.what());
  }
}

}  // namespace

HttpBackend::HttpBackend(std::string base_url, HttpBackendOptions options)
    : base_url_(std::move(base_url)), options_(options) {
  SplitUrl(base_url_);
}

BackendInfo HttpBackend::info() const {
  std::lock_guard lock(info_mutex_);
  if (info_) return *info_;
  const Endpoint ep = SplitUrl(base_url_);
  auto client = MakeClient(ep, options_);
  const std::string url = base_url_ + "/v1/info";
  auto res = client.Get(ep.prefix + "/v1/info");
  if (!res) TransportFailure(url, res.error());
  if (res->status != 200) {
    throw Error(ErrorCode::kBackendUnavailable, url + " returned HTTP " + std::to_string(res->status));
  }
  const json doc = ParseBody(url, res->body);
  try {
    BackendInfo info;
    info.identity = doc.at("identity").get<std::string>();
    info.model_style = ParseModelStyle(doc.at("model_style").get<std::string>());
    info.mask_token = doc.value("mask_token", std::string{});
    info_ = info;
  } catch (const json::exception& e) {
    throw Error(ErrorCode::kProtocolError, url + ": " + e.what());
  } catch (const Error& e) {
    throw Error(ErrorCode::kProtocolError, url + ": " + e.message());
  }
  return *info_;
}

bool HttpBackend::supports(ModelStyle style) const { return info().model_style == style; }

LogitRows HttpBackend::score(ModelStyle style, std::span<const std::string> label_words,
                             std::span<const std::string> texts) const {
  const Endpoint ep = SplitUrl(base_url_);
  auto client = MakeClient(ep, options_);
  const std::string url = base_url_ + "/v1/score";

  json request;
  request["model_style"] = ToString(style);
  request["label_words"] = json::array();
  for (const auto& word : label_words) request["label_words"].push_back(word);
  request["texts"] = json::array();
  for (const auto& text : texts) request["texts"].push_back(text);

  auto res = client.Post(ep.prefix + "/v1/score", request.dump(), "application/json");
  if (!res) TransportFailure(url, res.error());
  if (res->status == 422) {
    const json doc = ParseBody(url, res->body);
    if (doc.value("error", std::string{}) == "multi_token_label_word") {
      throw Error(ErrorCode::kMultiTokenLabelWord,
                  "label word '" + doc.value("word", std::string{}) + "' is not a single token for " + base_url_);
    }
    throw Error(ErrorCode::kProtocolError, url + " returned 422: " + res->body);
  }
  if (res->status != 200) {
    throw Error(ErrorCode::kBackendUnavailable, url + " returned HTTP " + std::to_string(res->status));
  }
  const json doc = ParseBody(url, res->body);
  LogitRows rows;
  try {
    for (const auto& row : doc.at("logits")) {
      auto& out = rows.emplace_back();
      out.reserve(row.size());
      for (const auto& v : row) {
        if (!v.is_number()) throw Error(ErrorCode::kNonFiniteLogit, url + ": logit is not a finite number");
        out.push_back(v.get<double>());
      }
    }
  } catch (const json::exception& e) {
    throw Error(ErrorCode::kProtocolError, url + ": " + e.what());
  }
  CheckLogitRows(rows, texts.size(), label_words.size());
  return rows;
}

}  // namespace lotto
