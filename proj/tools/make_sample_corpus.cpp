// Writes the deterministic sample corpus as JSONL plus a pre-warmed chat
// response cache, so CLI runs and experiments have data without network access.
#include <cstdio>
#include <filesystem>
#include <string>

#include <CLI11.hpp>

#include "sample_corpus.hpp"
#include "stylodetect/corpus.hpp"

int main(int argc, char** argv) {
    CLI::App app{"generate the bundled sample corpus and chat cache"};
    std::string out_dir = ".";
    uint64_t seed = stylo::testgen::kCorpusSeed;
    app.add_option("--out", out_dir, "output directory (created if missing)");
    app.add_option("--seed", seed, "corpus generator seed");
    CLI11_PARSE(app, argc, argv);

    namespace fs = std::filesystem;
    std::error_code ec;
    fs::create_directories(out_dir, ec);
    if (ec) {
        std::fprintf(stderr, "cannot create %s: %s\n", out_dir.c_str(), ec.message().c_str());
        return 1;
    }

    auto samples = stylo::testgen::sample_corpus(seed);
    std::string corpus_path = (fs::path(out_dir) / "corpus.jsonl").string();
    std::string cache_path = (fs::path(out_dir) / "chat_cache.jsonl").string();
    stylo::corpus::save_corpus(samples, corpus_path);
    stylo::testgen::write_chat_cache(samples, cache_path);

    std::printf("wrote %zu samples to %s\n", samples.size(), corpus_path.c_str());
    std::printf("wrote chat cache to %s\n", cache_path.c_str());
    return 0;
}
