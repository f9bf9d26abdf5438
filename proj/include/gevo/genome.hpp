#pragma once

#include <cstdint>
#include <random>
#include <vector>

namespace gevo {

// A linear chromosome: a list of integer codons, each in [0, codon_size).
// Value type; validates its invariant on construction.
class Genome {
  public:
    static constexpr std::uint32_t kDefaultCodonSize = 100000;

    Genome() = default;
    Genome(std::vector<std::uint32_t> codons, std::uint32_t codon_size = kDefaultCodonSize);

    std::size_t size() const { return codons_.size(); }
    bool empty() const { return codons_.empty(); }
    std::uint32_t operator[](std::size_t i) const { return codons_[i]; }
    const std::vector<std::uint32_t>& codons() const { return codons_; }
    std::uint32_t codon_size() const { return codon_size_; }

    bool operator==(const Genome&) const = default;

  private:
    std::vector<std::uint32_t> codons_;
    std::uint32_t codon_size_ = kDefaultCodonSize;
};

// Uniformly random genome of the given length.
Genome random_genome(std::size_t length, std::uint32_t codon_size, std::mt19937& rng);

}  // namespace gevo
