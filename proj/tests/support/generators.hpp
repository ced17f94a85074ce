#pragma once

#include <cstdint>
#include <random>
#include <string>
#include <vector>

#include "paramsub/bpa.hpp"

namespace paramsub::testing {

using Rng = std::mt19937_64;

struct SignatureShape {
  std::size_t max_constructors = 4;
  std::size_t max_params = 2;
  std::size_t max_depth = 3;
  std::size_t max_labels = 3;
  bool quantifiers = true;
};

// `.poly` text for a random signature whose definitions are contractive
// and closed. With max_params = 0 and no quantifiers the result is
// monomorphic.
std::string random_signature(Rng& rng, const SignatureShape& shape);

// A closed type over the constructors of `text` (as produced above), e.g.
// "c1[c0, c2[c0]]". Arities are read back from the text.
std::string random_closed_type(Rng& rng, const std::string& text, std::size_t max_depth = 2);

// At most `max_vars` variables over actions {a, b, c}, words of length at
// most `max_word`.
BpaSystem random_bpa(Rng& rng, std::size_t max_vars = 3, std::size_t max_word = 2);
BpaWord random_word(Rng& rng, const BpaSystem& sys, std::size_t max_len = 2);

// Directory holding the shipped `.poly` corpus.
std::string corpus_dir();
std::string read_corpus(const std::string& name);
std::vector<std::string> corpus_files();

}  // namespace paramsub::testing
