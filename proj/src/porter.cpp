#include <span>
#include <string>
#include <string_view>
#include <unordered_map>

#include "geolex/text.hpp"

namespace geolex {

namespace {

bool is_consonant(std::string_view w, size_t i) {
  // 'y' is a consonant at position 0 or after a vowel, a vowel after a
  // consonant; walk left through 'y' runs flipping parity
  bool flip = false;
  for (;;) {
    char c = w[i];
    if (c == 'a' || c == 'e' || c == 'i' || c == 'o' || c == 'u') return flip;
    if (c != 'y') return !flip;
    if (i == 0) return !flip;
    flip = !flip;
    --i;
  }
}

// number of vowel->consonant transitions in the consonant/vowel map
int measure(std::string_view stem) {
  int m = 0;
  bool prev_vowel = false;
  for (size_t i = 0; i < stem.size(); ++i) {
    bool cons = is_consonant(stem, i);
    if (prev_vowel && cons) ++m;
    prev_vowel = !cons;
  }
  return m;
}

bool has_positive_measure(std::string_view stem) { return measure(stem) > 0; }
bool measure_gt_1(std::string_view stem) { return measure(stem) > 1; }

bool contains_vowel(std::string_view stem) {
  for (size_t i = 0; i < stem.size(); ++i)
    if (!is_consonant(stem, i)) return true;
  return false;
}

bool ends_double_consonant(std::string_view w) {
  size_t n = w.size();
  return n >= 2 && w[n - 1] == w[n - 2] && is_consonant(w, n - 1);
}

bool ends_cvc(std::string_view w) {
  size_t n = w.size();
  if (n >= 3 && is_consonant(w, n - 3) && !is_consonant(w, n - 2) &&
      is_consonant(w, n - 1) && w[n - 1] != 'w' && w[n - 1] != 'x' &&
      w[n - 1] != 'y')
    return true;
  // a two-letter vowel-consonant word counts as cvc
  return n == 2 && !is_consonant(w, 0) && is_consonant(w, 1);
}

bool ends_with(std::string_view w, std::string_view suffix) {
  return w.size() >= suffix.size() &&
         w.substr(w.size() - suffix.size()) == suffix;
}

using Cond = bool (*)(std::string_view);

struct Rule {
  std::string_view suffix;
  std::string_view replacement;
  Cond cond;  // nullptr means unconditional
};

// The first rule whose suffix matches decides the outcome: the replacement
// is applied when the condition holds on the remaining stem, otherwise the
// word is returned unchanged and no further rules are tried.
std::string apply_rule_list(std::string_view word, std::span<const Rule> rules) {
  for (const Rule& r : rules) {
    if (!ends_with(word, r.suffix)) continue;
    std::string_view stem = word.substr(0, word.size() - r.suffix.size());
    if (r.cond && !r.cond(stem)) return std::string(word);
    std::string out(stem);
    out.append(r.replacement);
    return out;
  }
  return std::string(word);
}

std::string step1a(std::string_view w) {
  // four-letter plural keeps the 'e': dies -> die, but flies -> fli
  if (ends_with(w, "ies") && w.size() == 4)
    return std::string(w.substr(0, w.size() - 3)) + "ie";
  static constexpr Rule rules[] = {
      {"sses", "ss", nullptr},
      {"ies", "i", nullptr},
      {"ss", "ss", nullptr},
      {"s", "", nullptr},
  };
  return apply_rule_list(w, rules);
}

std::string step1b(std::string_view w) {
  // died -> die, but spied -> spi
  if (ends_with(w, "ied"))
    return std::string(w.substr(0, w.size() - 3)) + (w.size() == 4 ? "ie" : "i");
  if (ends_with(w, "eed")) {
    std::string_view stem = w.substr(0, w.size() - 3);
    if (measure(stem) > 0) return std::string(stem) + "ee";
    return std::string(w);
  }

  bool stripped = false;
  std::string_view inter;
  for (std::string_view suffix : {std::string_view("ed"), std::string_view("ing")}) {
    if (!ends_with(w, suffix)) continue;
    inter = w.substr(0, w.size() - suffix.size());
    if (contains_vowel(inter)) stripped = true;
    break;
  }
  if (!stripped) return std::string(w);

  static constexpr Rule restore[] = {
      {"at", "ate", nullptr},
      {"bl", "ble", nullptr},
      {"iz", "ize", nullptr},
  };
  for (const Rule& r : restore)
    if (ends_with(inter, r.suffix))
      return std::string(inter.substr(0, inter.size() - r.suffix.size())) +
             std::string(r.replacement);
  if (ends_double_consonant(inter)) {
    char last = inter.back();
    if (last != 'l' && last != 's' && last != 'z')
      return std::string(inter.substr(0, inter.size() - 1));
    return std::string(inter);
  }
  if (measure(inter) == 1 && ends_cvc(inter)) return std::string(inter) + "e";
  return std::string(inter);
}

bool cond_y_to_i(std::string_view stem) {
  return stem.size() > 1 && is_consonant(stem, stem.size() - 1);
}

std::string step1c(std::string_view w) {
  static constexpr Rule rules[] = {{"y", "i", cond_y_to_i}};
  return apply_rule_list(w, rules);
}

// the 'l' of 'logi' belongs to the stem: geologi -> geolog
bool cond_logi(std::string_view stem) {
  std::string with_l(stem);
  with_l.push_back('l');
  return has_positive_measure(with_l);
}

std::string step2(std::string_view w) {
  if (ends_with(w, "alli") &&
      has_positive_measure(w.substr(0, w.size() - 4)))
    return step2(std::string(w.substr(0, w.size() - 4)) + "al");

  static constexpr Rule rules[] = {
      {"ational", "ate", has_positive_measure},
      {"tional", "tion", has_positive_measure},
      {"enci", "ence", has_positive_measure},
      {"anci", "ance", has_positive_measure},
      {"izer", "ize", has_positive_measure},
      {"bli", "ble", has_positive_measure},
      {"alli", "al", has_positive_measure},
      {"entli", "ent", has_positive_measure},
      {"eli", "e", has_positive_measure},
      {"ousli", "ous", has_positive_measure},
      {"ization", "ize", has_positive_measure},
      {"ation", "ate", has_positive_measure},
      {"ator", "ate", has_positive_measure},
      {"alism", "al", has_positive_measure},
      {"iveness", "ive", has_positive_measure},
      {"fulness", "ful", has_positive_measure},
      {"ousness", "ous", has_positive_measure},
      {"aliti", "al", has_positive_measure},
      {"iviti", "ive", has_positive_measure},
      {"biliti", "ble", has_positive_measure},
      {"fulli", "ful", has_positive_measure},
      {"logi", "log", cond_logi},
  };
  return apply_rule_list(w, rules);
}

std::string step3(std::string_view w) {
  static constexpr Rule rules[] = {
      {"icate", "ic", has_positive_measure},
      {"ative", "", has_positive_measure},
      {"alize", "al", has_positive_measure},
      {"iciti", "ic", has_positive_measure},
      {"ical", "ic", has_positive_measure},
      {"ful", "", has_positive_measure},
      {"ness", "", has_positive_measure},
  };
  return apply_rule_list(w, rules);
}

bool cond_ion(std::string_view stem) {
  return measure(stem) > 1 && !stem.empty() &&
         (stem.back() == 's' || stem.back() == 't');
}

std::string step4(std::string_view w) {
  static constexpr Rule rules[] = {
      {"al", "", measure_gt_1},
      {"ance", "", measure_gt_1},
      {"ence", "", measure_gt_1},
      {"er", "", measure_gt_1},
      {"ic", "", measure_gt_1},
      {"able", "", measure_gt_1},
      {"ible", "", measure_gt_1},
      {"ant", "", measure_gt_1},
      {"ement", "", measure_gt_1},
      {"ment", "", measure_gt_1},
      {"ent", "", measure_gt_1},
      {"ion", "", cond_ion},
      {"ou", "", measure_gt_1},
      {"ism", "", measure_gt_1},
      {"ate", "", measure_gt_1},
      {"iti", "", measure_gt_1},
      {"ous", "", measure_gt_1},
      {"ive", "", measure_gt_1},
      {"ize", "", measure_gt_1},
  };
  return apply_rule_list(w, rules);
}

std::string step5a(std::string_view w) {
  if (!w.empty() && w.back() == 'e') {
    std::string_view stem = w.substr(0, w.size() - 1);
    int m = measure(stem);
    if (m > 1) return std::string(stem);
    if (m == 1 && !ends_cvc(stem)) return std::string(stem);
  }
  return std::string(w);
}

std::string step5b(std::string_view w) {
  if (measure(w) > 1 && ends_double_consonant(w) && w.back() == 'l')
    return std::string(w.substr(0, w.size() - 1));
  return std::string(w);
}

const std::unordered_map<std::string_view, std::string_view>& irregular_pool() {
  static const std::unordered_map<std::string_view, std::string_view> pool = {
      {"sky", "sky"},       {"skies", "sky"},     {"dying", "die"},
      {"lying", "lie"},     {"tying", "tie"},     {"news", "news"},
      {"innings", "inning"}, {"inning", "inning"},
      {"outings", "outing"}, {"outing", "outing"},
      {"cannings", "canning"}, {"canning", "canning"},
      {"howe", "howe"},     {"proceed", "proceed"},
      {"exceed", "exceed"}, {"succeed", "succeed"},
  };
  return pool;
}

}  // namespace

std::string porter_stem(std::string_view word) {
  std::string w(word);
  for (char& c : w)
    if (c >= 'A' && c <= 'Z') c = static_cast<char>(c - 'A' + 'a');

  const auto& pool = irregular_pool();
  if (auto it = pool.find(std::string_view(w)); it != pool.end())
    return std::string(it->second);
  if (w.size() <= 2) return w;

  w = step1a(w);
  w = step1b(w);
  w = step1c(w);
  w = step2(w);
  w = step3(w);
  w = step4(w);
  w = step5a(w);
  w = step5b(w);
  return w;
}

}  // namespace geolex
