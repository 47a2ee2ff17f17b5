#include "bnbpe/grapheme.hpp"

#include "bnbpe/utf8.hpp"

namespace bnbpe {

const char* to_string(CodepointClass cls) {
  switch (cls) {
    case CodepointClass::kIndependentVowel: return "IndependentVowel";
    case CodepointClass::kConsonant: return "Consonant";
    case CodepointClass::kDependentVowelSign: return "DependentVowelSign";
    case CodepointClass::kVirama: return "Virama";
    case CodepointClass::kNukta: return "Nukta";
    case CodepointClass::kModifier: return "Modifier";
    case CodepointClass::kJoiner: return "Joiner";
    case CodepointClass::kPunctuation: return "Punctuation";
    case CodepointClass::kSpace: return "Space";
    case CodepointClass::kOther: return "Other";
  }
  return "Other";
}

CodepointClass classify_codepoint(char32_t cp) {
  using C = CodepointClass;
  if (cp == U' ') return C::kSpace;
  if (cp == 0x200C || cp == 0x200D) return C::kJoiner;
  if (cp == 0x0964 || cp == 0x0965) return C::kPunctuation;
  if (cp < 0x80) {
    const bool punct = (cp >= 0x21 && cp <= 0x2F) || (cp >= 0x3A && cp <= 0x40) ||
                       (cp >= 0x5B && cp <= 0x60) || (cp >= 0x7B && cp <= 0x7E);
    return punct ? C::kPunctuation : C::kOther;
  }
  if (cp < 0x0980 || cp > 0x09FF) return C::kOther;

  if (cp >= 0x0981 && cp <= 0x0983) return C::kModifier;
  if ((cp >= 0x0985 && cp <= 0x0994) || cp == 0x098C || cp == 0x09E0 || cp == 0x09E1) {
    return C::kIndependentVowel;
  }
  if ((cp >= 0x0995 && cp <= 0x09B9) || (cp >= 0x09DC && cp <= 0x09DF) || cp == 0x09CE ||
      cp == 0x09F0 || cp == 0x09F1) {
    return C::kConsonant;
  }
  if (cp == 0x09BC) return C::kNukta;
  if ((cp >= 0x09BE && cp <= 0x09CC) || cp == 0x09D7 || cp == 0x09E2 || cp == 0x09E3) {
    return C::kDependentVowelSign;
  }
  if (cp == 0x09CD) return C::kVirama;
  if (cp == 0x09FE) return C::kModifier;
  return C::kOther;
}

bool is_combining_class(CodepointClass cls) {
  return cls == CodepointClass::kDependentVowelSign || cls == CodepointClass::kVirama ||
         cls == CodepointClass::kNukta || cls == CodepointClass::kModifier ||
         cls == CodepointClass::kJoiner;
}

bool starts_with_combining_mark(std::string_view text) {
  if (text.empty()) return false;
  std::size_t pos = 0;
  return is_combining_class(classify_codepoint(next_codepoint(text, pos)));
}

namespace {

struct Cursor {
  std::string_view text;
  std::size_t pos = 0;

  bool done() const { return pos >= text.size(); }

  // Class of the code point `ahead` positions after the cursor, or kOther
  // past the end (never matches a grammar slot that needs a letter).
  CodepointClass peek(int ahead = 0) const {
    std::size_t p = pos;
    for (int i = 0; i <= ahead; ++i) {
      if (p >= text.size()) return CodepointClass::kSpace;
      const char32_t cp = next_codepoint(text, p);
      if (i == ahead) return classify_codepoint(cp);
    }
    return CodepointClass::kSpace;
  }

  void advance() { next_codepoint(text, pos); }
};

}  // namespace

std::vector<ClusterSpan> cluster_spans(std::string_view text) {
  using C = CodepointClass;
  std::vector<ClusterSpan> spans;
  Cursor cur{text};
  while (!cur.done()) {
    const std::size_t start = cur.pos;
    const C first = cur.peek();
    bool degenerate = false;
    bool letter = false;

    if (first == C::kConsonant) {
      letter = true;
      cur.advance();
      if (cur.peek() == C::kNukta) cur.advance();
      for (;;) {
        if (cur.peek() != C::kVirama) break;
        if (cur.peek(1) == C::kConsonant) {
          cur.advance();
        } else if (cur.peek(1) == C::kJoiner && cur.peek(2) == C::kConsonant) {
          cur.advance();
          cur.advance();
        } else {
          break;
        }
        cur.advance();  // the consonant
        if (cur.peek() == C::kNukta) cur.advance();
      }
      if (cur.peek() == C::kDependentVowelSign) cur.advance();
      while (cur.peek() == C::kModifier) cur.advance();
    } else if (first == C::kIndependentVowel) {
      letter = true;
      cur.advance();
      while (cur.peek() == C::kModifier) cur.advance();
    } else if (is_combining_class(first)) {
      // A stray mark after a letter cluster belongs to that cluster.
      if (!spans.empty() && spans.back().length > 0) {
        const auto& prev = spans.back();
        const C prev_first = classify_codepoint([&] {
          std::size_t p = prev.offset;
          return next_codepoint(text, p);
        }());
        if (prev_first != C::kSpace && prev_first != C::kPunctuation) {
          auto& target = spans.back();
          while (!cur.done() && is_combining_class(cur.peek())) cur.advance();
          target.length = cur.pos - target.offset;
          target.degenerate = true;
          continue;
        }
      }
      degenerate = true;
      letter = true;  // empty base; collect the run of marks below
    } else {
      cur.advance();
    }

    if (letter) {
      while (!cur.done() && is_combining_class(cur.peek())) {
        cur.advance();
        degenerate = true;
      }
    }
    spans.push_back({start, cur.pos - start, degenerate});
  }
  return spans;
}

std::vector<std::string_view> split_graphemes(std::string_view text) {
  std::vector<std::string_view> out;
  for (const auto& span : cluster_spans(text)) out.push_back(text.substr(span.offset, span.length));
  return out;
}

std::vector<GraphemeCluster> segment_graphemes(std::string_view text) {
  std::vector<GraphemeCluster> out;
  for (const auto& span : cluster_spans(text)) {
    GraphemeCluster cluster;
    cluster.surface = std::string(text.substr(span.offset, span.length));
    cluster.codepoints = decode_utf8(cluster.surface);
    cluster.degenerate = span.degenerate;
    out.push_back(std::move(cluster));
  }
  return out;
}

std::vector<GraphemeCluster> segment_graphemes(const NormalizedText& text) {
  return segment_graphemes(text.content());
}

}  // namespace bnbpe
