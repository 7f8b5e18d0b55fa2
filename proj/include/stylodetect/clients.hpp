#pragma once

#include <map>
#include <memory>
#include <mutex>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "stylodetect/ngram_lm.hpp"
#include "stylodetect/vectorize.hpp"

namespace stylo::clients {

enum class ProviderKind { grammar, chat, embedding, lm };
enum class ProviderMode { live, cached_only, fallback };

const char* to_string(ProviderKind k);
const char* to_string(ProviderMode m);
ProviderMode mode_from_string(const std::string& s); // throws on unknown

// Endpoint and key fall back to STYLO_GRAMMAR_URL / STYLO_CHAT_URL /
// STYLO_EMBED_URL and STYLO_API_KEY when left empty.
struct ProviderConfig {
    ProviderKind kind = ProviderKind::grammar;
    ProviderMode mode = ProviderMode::fallback;
    std::string endpoint;
    std::string api_key;
    std::string cache_path; // empty disables caching
    double timeout_sec = 10.0;
    int max_retries = 2;
    double rate_limit_per_sec = 0.0; // 0 = unlimited

    std::string resolved_endpoint() const;
    std::string resolved_api_key() const;
};

// Throws std::invalid_argument when the mode's requirements are unmet:
// live needs an endpoint, cached_only needs an existing cache file.
void validate_config(const ProviderConfig& cfg);

// Injectable time source so rate limiting and retry backoff are testable
// with a virtual clock.
class Clock {
public:
    virtual ~Clock() = default;
    virtual double now() = 0;
    virtual void sleep_for(double seconds) = 0;
    static Clock& system();
};

struct HttpResponse {
    int status = 0;
    std::string body;
};

// Injectable HTTP layer; tests substitute counting/scripted doubles.
class HttpTransport {
public:
    virtual ~HttpTransport() = default;
    virtual HttpResponse post(const std::string& url, const std::string& content_type,
                              const std::string& body,
                              const std::vector<std::pair<std::string, std::string>>& headers,
                              double timeout_sec) = 0;
    static HttpTransport& system();
};

// Append-only JSONL response cache. Each line holds key (SHA-256 of the
// canonical request), response, timestamp, provider_version. Lookups are
// exact-match; a key is never overwritten once present.
class ResponseCache {
public:
    explicit ResponseCache(std::string path);

    static std::string key_for(ProviderKind kind, const std::string& canonical_request);

    std::optional<std::string> get(const std::string& key) const;
    void put(const std::string& key, const std::string& response,
             const std::string& provider_version);
    size_t size() const;
    const std::string& path() const { return path_; }

private:
    std::string path_;
    std::map<std::string, std::string> entries_;
    mutable std::mutex mu_;
};

// Spaces acquisitions at least 1/per_sec apart; per_sec <= 0 disables.
class RateLimiter {
public:
    RateLimiter(double per_sec, Clock& clock);
    void acquire();

private:
    double min_interval_;
    double next_allowed_ = 0.0;
    Clock& clock_;
    std::mutex mu_;
};

// Shared plumbing: cache lookup -> rate limit -> POST with retries -> cache
// write. Subclasses own request/response shapes.
class ServiceClient {
public:
    virtual ~ServiceClient() = default;
    const ProviderConfig& config() const { return cfg_; }
    size_t network_calls() const { return network_calls_; }

protected:
    ServiceClient(ProviderConfig cfg, HttpTransport* transport, Clock* clock);
    // Returns the response body for the canonical request, consulting the
    // cache first; cached_only mode never reaches the network.
    std::string fetch(const std::string& canonical_request, const std::string& url,
                      const std::string& content_type, const std::string& payload);
    // POST with retries/rate limiting but no cache key (used for batches
    // whose elements are cached individually by the caller).
    std::string fetch_batch(const std::string& payload);

    ProviderConfig cfg_;
    HttpTransport* transport_;
    Clock* clock_;
    std::unique_ptr<ResponseCache> cache_;
    RateLimiter limiter_;
    size_t network_calls_ = 0;
    std::mutex mu_;
};

struct GrammarResult {
    std::vector<std::string> messages; // one per reported match
    int count() const { return static_cast<int>(messages.size()); }
};

// LanguageTool-compatible checker: POST form text/language to
// <endpoint>/v2/check, count entries of the response's "matches" array.
class GrammarClient : public ServiceClient {
public:
    explicit GrammarClient(ProviderConfig cfg, HttpTransport* transport = nullptr,
                           Clock* clock = nullptr);
    GrammarResult check(const std::string& text);
};

// Asks the chat service whether it generated `text`; returns the raw reply.
// There is no offline fallback: cached_only/fallback modes serve the cache
// or fail.
class ChatClient : public ServiceClient {
public:
    explicit ChatClient(ProviderConfig cfg, HttpTransport* transport = nullptr,
                        Clock* clock = nullptr);
    static std::string prompt_for(const std::string& text);
    std::string feedback(const std::string& text);
};

// Remote sentence embedder: POST {"texts": [...]} -> {"vectors": [[...]]},
// L2-normalized client-side and cached per sentence.
class EmbeddingClient : public ServiceClient, public vec::SentenceEmbedder {
public:
    explicit EmbeddingClient(ProviderConfig cfg, HttpTransport* transport = nullptr,
                             Clock* clock = nullptr);
    std::vector<std::vector<double>> embed(const std::vector<std::string>& sentences) const override;
    size_t dim() const override { return dim_; }
    std::string id() const override;

private:
    mutable size_t dim_ = 0; // learned from the first response
};

// Remote perplexity scorer: POST {"texts": [...]} -> {"perplexities": [...]}.
class LmScorerClient : public ServiceClient, public lm::SentenceScorer {
public:
    explicit LmScorerClient(ProviderConfig cfg, HttpTransport* transport = nullptr,
                            Clock* clock = nullptr);
    double sentence_perplexity(const std::vector<std::string>& words) const override;
};

} // namespace stylo::clients
