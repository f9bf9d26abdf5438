#include "gevo/genome.hpp"

#include <stdexcept>
#include <string>

namespace gevo {

Genome::Genome(std::vector<std::uint32_t> codons, std::uint32_t codon_size)
    : codons_(std::move(codons)), codon_size_(codon_size) {
    if (codon_size_ == 0) throw std::invalid_argument("codon_size must be positive");
    for (auto c : codons_)
        if (c >= codon_size_)
            throw std::invalid_argument("codon " + std::to_string(c) + " out of range [0, " +
                                        std::to_string(codon_size_) + ")");
}

Genome random_genome(std::size_t length, std::uint32_t codon_size, std::mt19937& rng) {
    std::uniform_int_distribution<std::uint32_t> dist(0, codon_size - 1);
    std::vector<std::uint32_t> codons(length);
    for (auto& c : codons) c = dist(rng);
    return Genome(std::move(codons), codon_size);
}

}  // namespace gevo
