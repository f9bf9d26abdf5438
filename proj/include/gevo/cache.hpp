#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <unordered_map>

namespace gevo {

enum class CachePolicy { lookup, off };

// Phenotype -> fitness memo. Under the lookup policy a phenotype is scored at
// most once per run; failed evaluations are remembered as empty entries so
// they are not retried. `off` disables the memo entirely.
class FitnessCache {
  public:
    // An entry whose fitness is empty records an evaluation that failed.
    struct Entry {
        std::optional<double> fitness;
    };

    explicit FitnessCache(CachePolicy policy = CachePolicy::lookup) : policy_(policy) {}

    // nullptr on miss (or when the cache is off). The pointer stays valid
    // until the cache is destroyed.
    const Entry* get(const std::string& phenotype) {
        if (policy_ == CachePolicy::off) return nullptr;
        auto it = map_.find(phenotype);
        if (it == map_.end()) return nullptr;
        ++hits_;
        return &it->second;
    }

    void put(const std::string& phenotype, std::optional<double> fitness) {
        if (policy_ == CachePolicy::off) return;
        map_.emplace(phenotype, Entry{fitness});
    }

    CachePolicy policy() const { return policy_; }
    std::uint64_t hits() const { return hits_; }
    std::size_t size() const { return map_.size(); }

  private:
    CachePolicy policy_;
    std::unordered_map<std::string, Entry> map_;
    std::uint64_t hits_ = 0;
};

}  // namespace gevo
