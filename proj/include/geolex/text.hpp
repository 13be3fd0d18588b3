#pragma once

#include <filesystem>
#include <string>
#include <string_view>
#include <unordered_set>
#include <vector>

namespace geolex {

using StopwordSet = std::unordered_set<std::string>;

// One word per line, '#' comment lines and blanks skipped, case-folded,
// deduplicated.
StopwordSet load_stopwords(const std::filesystem::path& path);

// Porter suffix stemmer with the common toolkit extensions (irregular-form
// pool, two-letter passthrough, ies/ied four-letter handling,
// consonant-conditioned y->i, alli/fulli/logi adjustments). Expects a
// lowercase [a-z0-9]+ token; uppercase input is folded first.
std::string porter_stem(std::string_view word);

// Full text normalization: lowercase, blank out URLs (http://, https://,
// www. up to whitespace), drop @mentions, split on every non-alphanumeric
// byte (the '#' of a hashtag separates, leaving the tag body), drop
// stopwords, stem each token until stable, drop tokens that stemmed into
// stopwords or nothing. Deterministic and order-preserving.
std::vector<std::string> preprocess(std::string_view text, const StopwordSet& stopwords);

}  // namespace geolex
