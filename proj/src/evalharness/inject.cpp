#include <random>
#include <set>

#include "tooldc/evalharness.hpp"

namespace tooldc {

namespace {

// Uniform draw in [0, n) straight from the engine's output. The standard
// distributions are implementation-defined, which would make injected
// datasets differ between standard libraries.
std::size_t draw(std::mt19937_64& rng, std::size_t n) {
    const std::uint64_t bound = static_cast<std::uint64_t>(n);
    const std::uint64_t limit = std::mt19937_64::max() - std::mt19937_64::max() % bound;
    std::uint64_t x;
    do {
        x = rng();
    } while (x >= limit);
    return static_cast<std::size_t>(x % bound);
}

std::uint64_t splitmix64(std::uint64_t x) {
    x += 0x9E3779B97F4A7C15ULL;
    x = (x ^ (x >> 30)) * 0xBF58476D1CE4E5B9ULL;
    x = (x ^ (x >> 27)) * 0x94D049BB133111EBULL;
    return x ^ (x >> 31);
}

}  // namespace

std::uint64_t derive_seed(std::uint64_t seed, std::string_view id) {
    std::uint64_t h = 0xCBF29CE484222325ULL;  // FNV-1a
    for (const char c : id) {
        h ^= static_cast<unsigned char>(c);
        h *= 0x100000001B3ULL;
    }
    return splitmix64(seed ^ h);
}

EvalInstance inject_noise(const EvalInstance& instance, const ToolLibrary& pool, std::size_t target_n,
                          std::uint64_t seed) {
    const auto& original = instance.library.tools();
    if (target_n < original.size())
        throw std::invalid_argument("inject_noise: target " + std::to_string(target_n) + " is below the " +
                                    std::to_string(original.size()) + " original tools of " + instance.id);

    std::vector<const ToolDefinition*> candidates;
    for (const auto& tool : pool.tools()) {
        if (!instance.library.find(tool.name)) candidates.push_back(&tool);
    }
    const std::size_t need = target_n - original.size();
    if (candidates.size() < need)
        throw PoolExhausted("instance " + instance.id + ": needs " + std::to_string(need) + " distractors, pool has " +
                            std::to_string(candidates.size()));

    std::mt19937_64 rng(seed);
    for (std::size_t i = 0; i < need; ++i) std::swap(candidates[i], candidates[i + draw(rng, candidates.size() - i)]);

    std::vector<ToolDefinition> tools(original.begin(), original.end());
    for (std::size_t i = 0; i < need; ++i) tools.push_back(*candidates[i]);
    for (std::size_t i = tools.size(); i > 1; --i) std::swap(tools[i - 1], tools[draw(rng, i)]);

    EvalInstance out = instance;
    out.library = ToolLibrary(std::move(tools));
    return out;
}

}  // namespace tooldc
