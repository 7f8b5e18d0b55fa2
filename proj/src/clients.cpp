#include "stylodetect/clients.hpp"

#include <openssl/sha.h>

#include <cctype>
#include <chrono>
#include <cmath>
#include <cstdlib>
#include <ctime>
#include <fstream>
#include <stdexcept>
#include <thread>

#include <httplib.h>
#include <nlohmann/json.hpp>

namespace stylo::clients {

using nlohmann::json;
using ojson = nlohmann::ordered_json;

const char* to_string(ProviderKind k) {
    switch (k) {
        case ProviderKind::grammar: return "grammar";
        case ProviderKind::chat: return "chat";
        case ProviderKind::embedding: return "embedding";
        case ProviderKind::lm: return "lm";
    }
    return "?";
}

const char* to_string(ProviderMode m) {
    switch (m) {
        case ProviderMode::live: return "live";
        case ProviderMode::cached_only: return "cached_only";
        case ProviderMode::fallback: return "fallback";
    }
    return "?";
}

ProviderMode mode_from_string(const std::string& s) {
    if (s == "live") return ProviderMode::live;
    if (s == "cached_only") return ProviderMode::cached_only;
    if (s == "fallback") return ProviderMode::fallback;
    throw std::invalid_argument("unknown provider mode: " + s);
}

namespace {

std::string env_or_empty(const char* name) {
    const char* v = std::getenv(name);
    return v ? std::string(v) : std::string();
}

const char* endpoint_env_var(ProviderKind k) {
    switch (k) {
        case ProviderKind::grammar: return "STYLO_GRAMMAR_URL";
        case ProviderKind::chat: return "STYLO_CHAT_URL";
        case ProviderKind::embedding: return "STYLO_EMBED_URL";
        case ProviderKind::lm: return nullptr; // endpoint must be explicit
    }
    return nullptr;
}

std::string sha256_hex(const std::string& data) {
    unsigned char digest[SHA256_DIGEST_LENGTH];
    SHA256(reinterpret_cast<const unsigned char*>(data.data()), data.size(), digest);
    static const char* hex = "0123456789abcdef";
    std::string out;
    out.reserve(SHA256_DIGEST_LENGTH * 2);
    for (unsigned char b : digest) {
        out.push_back(hex[b >> 4]);
        out.push_back(hex[b & 0xf]);
    }
    return out;
}

std::string url_encode(const std::string& s) {
    static const char* hex = "0123456789ABCDEF";
    std::string out;
    out.reserve(s.size());
    for (unsigned char c : s) {
        if (std::isalnum(c) || c == '-' || c == '_' || c == '.' || c == '~') {
            out.push_back(static_cast<char>(c));
        } else {
            out.push_back('%');
            out.push_back(hex[c >> 4]);
            out.push_back(hex[c & 0xf]);
        }
    }
    return out;
}

bool file_exists(const std::string& path) {
    std::ifstream in(path);
    return in.good();
}

class SystemClock final : public Clock {
public:
    double now() override {
        auto t = std::chrono::steady_clock::now().time_since_epoch();
        return std::chrono::duration<double>(t).count();
    }
    void sleep_for(double seconds) override {
        if (seconds > 0) std::this_thread::sleep_for(std::chrono::duration<double>(seconds));
    }
};

// Splits "http://host:port/some/path" into client base and request path.
void split_url(const std::string& url, std::string& base, std::string& path) {
    auto scheme_end = url.find("://");
    size_t host_start = scheme_end == std::string::npos ? 0 : scheme_end + 3;
    auto slash = url.find('/', host_start);
    if (slash == std::string::npos) {
        base = url;
        path = "/";
    } else {
        base = url.substr(0, slash);
        path = url.substr(slash);
    }
}

class RealTransport final : public HttpTransport {
public:
    HttpResponse post(const std::string& url, const std::string& content_type,
                      const std::string& body,
                      const std::vector<std::pair<std::string, std::string>>& headers,
                      double timeout_sec) override {
        std::string base, path;
        split_url(url, base, path);
        httplib::Client cli(base);
        auto secs = static_cast<time_t>(timeout_sec);
        auto usecs = static_cast<time_t>((timeout_sec - static_cast<double>(secs)) * 1e6);
        cli.set_connection_timeout(secs, usecs);
        cli.set_read_timeout(secs, usecs);
        cli.set_write_timeout(secs, usecs);
        httplib::Headers hs;
        for (const auto& [k, v] : headers) hs.emplace(k, v);
        auto res = cli.Post(path, hs, body, content_type);
        if (!res) throw std::runtime_error("http transport error: " + httplib::to_string(res.error()));
        return {res->status, res->body};
    }
};

} // namespace

Clock& Clock::system() {
    static SystemClock c;
    return c;
}

HttpTransport& HttpTransport::system() {
    static RealTransport t;
    return t;
}

std::string ProviderConfig::resolved_endpoint() const {
    if (!endpoint.empty()) return endpoint;
    if (const char* var = endpoint_env_var(kind)) return env_or_empty(var);
    return {};
}

std::string ProviderConfig::resolved_api_key() const {
    if (!api_key.empty()) return api_key;
    return env_or_empty("STYLO_API_KEY");
}

void validate_config(const ProviderConfig& cfg) {
    const std::string name = to_string(cfg.kind);
    if (cfg.mode == ProviderMode::live && cfg.resolved_endpoint().empty())
        throw std::invalid_argument(name + ": live mode requires an endpoint (set the flag or URL env var)");
    if (cfg.mode == ProviderMode::cached_only) {
        if (cfg.cache_path.empty())
            throw std::invalid_argument(name + ": cached_only mode requires a cache path");
        if (!file_exists(cfg.cache_path))
            throw std::invalid_argument(name + ": cached_only mode requires an existing cache: " + cfg.cache_path);
    }
    if (cfg.mode == ProviderMode::fallback && cfg.kind != ProviderKind::chat)
        throw std::invalid_argument(name +
                                    ": fallback mode is served by the built-in local implementation; "
                                    "no network client is constructed for it");
    if (cfg.timeout_sec <= 0) throw std::invalid_argument(name + ": timeout must be positive");
    if (cfg.max_retries < 0) throw std::invalid_argument(name + ": max_retries must be >= 0");
    if (cfg.rate_limit_per_sec < 0) throw std::invalid_argument(name + ": rate limit must be >= 0");
}

// ---------------------------------------------------------------------------
// ResponseCache

ResponseCache::ResponseCache(std::string path) : path_(std::move(path)) {
    if (path_.empty()) throw std::invalid_argument("cache path must not be empty");
    std::ifstream in(path_);
    if (!in.good()) return; // created lazily on first put
    std::string line;
    size_t lineno = 0;
    while (std::getline(in, line)) {
        ++lineno;
        if (line.empty()) continue;
        json entry;
        try {
            entry = json::parse(line);
        } catch (const json::exception& e) {
            throw std::runtime_error(path_ + ":" + std::to_string(lineno) + ": bad cache line: " + e.what());
        }
        if (!entry.contains("key") || !entry["key"].is_string() || !entry.contains("response") ||
            !entry["response"].is_string())
            throw std::runtime_error(path_ + ":" + std::to_string(lineno) + ": cache line missing key/response");
        // first write wins; later duplicates are ignored to honor immutability
        entries_.emplace(entry["key"].get<std::string>(), entry["response"].get<std::string>());
    }
}

std::string ResponseCache::key_for(ProviderKind kind, const std::string& canonical_request) {
    return sha256_hex(std::string(to_string(kind)) + "\n" + canonical_request);
}

std::optional<std::string> ResponseCache::get(const std::string& key) const {
    std::lock_guard<std::mutex> lock(mu_);
    auto it = entries_.find(key);
    if (it == entries_.end()) return std::nullopt;
    return it->second;
}

void ResponseCache::put(const std::string& key, const std::string& response,
                        const std::string& provider_version) {
    std::lock_guard<std::mutex> lock(mu_);
    if (entries_.count(key)) return; // entries are immutable once written
    ojson entry;
    entry["key"] = key;
    entry["response"] = response;
    entry["timestamp"] = static_cast<long long>(std::time(nullptr));
    entry["provider_version"] = provider_version;
    std::ofstream out(path_, std::ios::app);
    if (!out) throw std::runtime_error("cannot append to cache: " + path_);
    out << entry.dump() << "\n";
    out.flush();
    if (!out) throw std::runtime_error("cache write failed: " + path_);
    entries_.emplace(key, response);
}

size_t ResponseCache::size() const {
    std::lock_guard<std::mutex> lock(mu_);
    return entries_.size();
}

// ---------------------------------------------------------------------------
// RateLimiter

RateLimiter::RateLimiter(double per_sec, Clock& clock)
    : min_interval_(per_sec > 0 ? 1.0 / per_sec : 0.0), clock_(clock) {}

void RateLimiter::acquire() {
    if (min_interval_ <= 0) return;
    std::lock_guard<std::mutex> lock(mu_);
    double now = clock_.now();
    if (next_allowed_ < now) next_allowed_ = now;
    double wait = next_allowed_ - now;
    if (wait > 0) clock_.sleep_for(wait);
    next_allowed_ += min_interval_;
}

// ---------------------------------------------------------------------------
// ServiceClient

ServiceClient::ServiceClient(ProviderConfig cfg, HttpTransport* transport, Clock* clock)
    : cfg_(std::move(cfg)),
      transport_(transport ? transport : &HttpTransport::system()),
      clock_(clock ? clock : &Clock::system()),
      limiter_(cfg_.rate_limit_per_sec, *(clock ? clock : &Clock::system())) {
    validate_config(cfg_);
    if (!cfg_.cache_path.empty()) cache_ = std::make_unique<ResponseCache>(cfg_.cache_path);
}

std::string ServiceClient::fetch(const std::string& canonical_request, const std::string& url,
                                 const std::string& content_type, const std::string& payload) {
    const std::string name = to_string(cfg_.kind);
    std::string key;
    if (cache_) {
        key = ResponseCache::key_for(cfg_.kind, canonical_request);
        if (auto hit = cache_->get(key)) return *hit;
    }
    if (cfg_.mode != ProviderMode::live)
        throw std::runtime_error(name + ": no cached response for request and network access is disabled (" +
                                 to_string(cfg_.mode) + " mode)");

    std::vector<std::pair<std::string, std::string>> headers;
    std::string api_key = cfg_.resolved_api_key();
    if (!api_key.empty()) headers.emplace_back("Authorization", "Bearer " + api_key);

    const int attempts = 1 + cfg_.max_retries;
    std::string last_error;
    for (int attempt = 0; attempt < attempts; ++attempt) {
        if (attempt > 0) clock_->sleep_for(0.2 * static_cast<double>(1 << (attempt - 1)));
        limiter_.acquire();
        HttpResponse res;
        try {
            ++network_calls_;
            res = transport_->post(url, content_type, payload, headers, cfg_.timeout_sec);
        } catch (const std::exception& e) {
            last_error = e.what();
            continue;
        }
        if (res.status >= 200 && res.status < 300) {
            if (cache_) cache_->put(key, res.body, cfg_.resolved_endpoint());
            return res.body;
        }
        last_error = "status " + std::to_string(res.status) + ": " + res.body.substr(0, 200);
        // client errors other than throttling are permanent
        if (res.status >= 400 && res.status < 500 && res.status != 408 && res.status != 429)
            throw std::runtime_error(name + " request rejected, " + last_error);
    }
    throw std::runtime_error(name + " request failed after " + std::to_string(attempts) +
                             " attempt(s): " + last_error);
}

// ---------------------------------------------------------------------------
// GrammarClient

GrammarClient::GrammarClient(ProviderConfig cfg, HttpTransport* transport, Clock* clock)
    : ServiceClient(std::move(cfg), transport, clock) {
    if (cfg_.kind != ProviderKind::grammar)
        throw std::invalid_argument("GrammarClient requires kind=grammar");
}

GrammarResult GrammarClient::check(const std::string& text) {
    ojson canonical;
    canonical["kind"] = "grammar";
    canonical["language"] = "en-US";
    canonical["text"] = text;
    std::string payload = "text=" + url_encode(text) + "&language=en-US";
    std::string body = fetch(canonical.dump(), cfg_.resolved_endpoint() + "/v2/check",
                             "application/x-www-form-urlencoded", payload);
    json parsed;
    try {
        parsed = json::parse(body);
    } catch (const json::exception& e) {
        throw std::runtime_error("grammar: unparseable response: " + std::string(e.what()));
    }
    if (!parsed.contains("matches") || !parsed["matches"].is_array())
        throw std::runtime_error("grammar: response has no \"matches\" array");
    GrammarResult result;
    for (const auto& m : parsed["matches"]) {
        if (m.is_object() && m.contains("message") && m["message"].is_string())
            result.messages.push_back(m["message"].get<std::string>());
        else
            result.messages.emplace_back();
    }
    return result;
}

// ---------------------------------------------------------------------------
// ChatClient

ChatClient::ChatClient(ProviderConfig cfg, HttpTransport* transport, Clock* clock)
    : ServiceClient(std::move(cfg), transport, clock) {
    if (cfg_.kind != ProviderKind::chat)
        throw std::invalid_argument("ChatClient requires kind=chat");
}

std::string ChatClient::prompt_for(const std::string& text) {
    return "Did you generate the following text? Answer yes or no.\n\n" + text;
}

std::string ChatClient::feedback(const std::string& text) {
    std::string prompt = prompt_for(text);
    ojson canonical;
    canonical["kind"] = "chat";
    canonical["prompt"] = prompt;
    ojson payload;
    payload["prompt"] = prompt;
    std::string body;
    try {
        body = fetch(canonical.dump(), cfg_.resolved_endpoint(), "application/json", payload.dump());
    } catch (const std::runtime_error& e) {
        if (cfg_.mode != ProviderMode::live)
            throw std::runtime_error(std::string(e.what()) + "; chat feedback has no offline fallback");
        throw;
    }
    json parsed;
    try {
        parsed = json::parse(body);
    } catch (const json::exception& e) {
        throw std::runtime_error("chat: unparseable response: " + std::string(e.what()));
    }
    if (!parsed.contains("response") || !parsed["response"].is_string())
        throw std::runtime_error("chat: response has no \"response\" string");
    return parsed["response"].get<std::string>();
}

// ---------------------------------------------------------------------------
// EmbeddingClient

EmbeddingClient::EmbeddingClient(ProviderConfig cfg, HttpTransport* transport, Clock* clock)
    : ServiceClient(std::move(cfg), transport, clock) {
    if (cfg_.kind != ProviderKind::embedding)
        throw std::invalid_argument("EmbeddingClient requires kind=embedding");
}

std::string EmbeddingClient::id() const { return "remote-embedding"; }

namespace {

std::vector<double> parse_vector(const json& arr, const char* what) {
    if (!arr.is_array() || arr.empty())
        throw std::runtime_error(std::string("embedding: ") + what + " is not a non-empty array");
    std::vector<double> v;
    v.reserve(arr.size());
    for (const auto& x : arr) {
        if (!x.is_number()) throw std::runtime_error(std::string("embedding: ") + what + " has a non-numeric entry");
        v.push_back(x.get<double>());
    }
    return v;
}

void l2_normalize(std::vector<double>& v) {
    double norm = 0;
    for (double x : v) norm += x * x;
    norm = std::sqrt(norm);
    if (norm > 0)
        for (double& x : v) x /= norm;
}

std::string canonical_embed_request(const std::string& sentence) {
    ojson canonical;
    canonical["kind"] = "embedding";
    canonical["text"] = sentence;
    return canonical.dump();
}

} // namespace

std::vector<std::vector<double>> EmbeddingClient::embed(const std::vector<std::string>& sentences) const {
    auto* self = const_cast<EmbeddingClient*>(this);
    std::vector<std::vector<double>> out(sentences.size());
    std::vector<size_t> misses;
    for (size_t i = 0; i < sentences.size(); ++i) {
        bool hit = false;
        if (cache_) {
            auto key = ResponseCache::key_for(ProviderKind::embedding, canonical_embed_request(sentences[i]));
            if (auto cached = cache_->get(key)) {
                out[i] = parse_vector(json::parse(*cached), "cached vector");
                hit = true;
            }
        }
        if (!hit) misses.push_back(i);
    }

    if (!misses.empty()) {
        if (cfg_.mode != ProviderMode::live)
            throw std::runtime_error("embedding: " + std::to_string(misses.size()) +
                                     " sentence(s) missing from cache and network access is disabled (" +
                                     to_string(cfg_.mode) + " mode)");
        ojson payload;
        payload["texts"] = ojson::array();
        for (size_t i : misses) payload["texts"].push_back(sentences[i]);
        // one canonical request per batch; caching happens per sentence below
        std::string body = self->fetch_batch(payload.dump());
        json parsed;
        try {
            parsed = json::parse(body);
        } catch (const json::exception& e) {
            throw std::runtime_error("embedding: unparseable response: " + std::string(e.what()));
        }
        if (!parsed.contains("vectors") || !parsed["vectors"].is_array() ||
            parsed["vectors"].size() != misses.size())
            throw std::runtime_error("embedding: response \"vectors\" missing or wrong length");
        for (size_t j = 0; j < misses.size(); ++j) {
            auto v = parse_vector(parsed["vectors"][j], "vector");
            l2_normalize(v);
            out[misses[j]] = std::move(v);
            if (cache_) {
                json arr = out[misses[j]];
                cache_->put(ResponseCache::key_for(ProviderKind::embedding,
                                                   canonical_embed_request(sentences[misses[j]])),
                            arr.dump(), cfg_.resolved_endpoint());
            }
        }
    }

    for (const auto& v : out) {
        if (v.empty()) continue;
        if (dim_ == 0) dim_ = v.size();
        if (v.size() != dim_)
            throw std::runtime_error("embedding: dimension mismatch (" + std::to_string(v.size()) +
                                     " vs " + std::to_string(dim_) + ")");
    }
    return out;
}

// Batch POST without per-request caching; reuses retry/rate-limit plumbing by
// bypassing the cache key (embeddings are cached per sentence, not per batch).
std::string ServiceClient::fetch_batch(const std::string& payload) {
    const std::string name = to_string(cfg_.kind);
    std::vector<std::pair<std::string, std::string>> headers;
    std::string api_key = cfg_.resolved_api_key();
    if (!api_key.empty()) headers.emplace_back("Authorization", "Bearer " + api_key);
    const int attempts = 1 + cfg_.max_retries;
    std::string last_error;
    for (int attempt = 0; attempt < attempts; ++attempt) {
        if (attempt > 0) clock_->sleep_for(0.2 * static_cast<double>(1 << (attempt - 1)));
        limiter_.acquire();
        HttpResponse res;
        try {
            ++network_calls_;
            res = transport_->post(cfg_.resolved_endpoint(), "application/json", payload, headers,
                                   cfg_.timeout_sec);
        } catch (const std::exception& e) {
            last_error = e.what();
            continue;
        }
        if (res.status >= 200 && res.status < 300) return res.body;
        last_error = "status " + std::to_string(res.status) + ": " + res.body.substr(0, 200);
        if (res.status >= 400 && res.status < 500 && res.status != 408 && res.status != 429)
            throw std::runtime_error(name + " request rejected, " + last_error);
    }
    throw std::runtime_error(name + " request failed after " + std::to_string(attempts) +
                             " attempt(s): " + last_error);
}

// ---------------------------------------------------------------------------
// LmScorerClient

LmScorerClient::LmScorerClient(ProviderConfig cfg, HttpTransport* transport, Clock* clock)
    : ServiceClient(std::move(cfg), transport, clock) {
    if (cfg_.kind != ProviderKind::lm)
        throw std::invalid_argument("LmScorerClient requires kind=lm");
}

double LmScorerClient::sentence_perplexity(const std::vector<std::string>& words) const {
    std::string joined;
    for (size_t i = 0; i < words.size(); ++i) {
        if (i) joined += ' ';
        joined += words[i];
    }
    ojson canonical;
    canonical["kind"] = "lm";
    canonical["text"] = joined;
    ojson payload;
    payload["texts"] = ojson::array({joined});
    auto* self = const_cast<LmScorerClient*>(this);
    std::string body =
        self->fetch(canonical.dump(), cfg_.resolved_endpoint(), "application/json", payload.dump());
    json parsed;
    try {
        parsed = json::parse(body);
    } catch (const json::exception& e) {
        throw std::runtime_error("lm: unparseable response: " + std::string(e.what()));
    }
    if (!parsed.contains("perplexities") || !parsed["perplexities"].is_array() ||
        parsed["perplexities"].size() != 1 || !parsed["perplexities"][0].is_number())
        throw std::runtime_error("lm: response has no one-element \"perplexities\" array");
    double ppl = parsed["perplexities"][0].get<double>();
    if (!(ppl > 0) || !std::isfinite(ppl)) throw std::runtime_error("lm: non-positive perplexity in response");
    return ppl;
}

} // namespace stylo::clients
