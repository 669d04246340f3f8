#pragma once

// Story normalization, run before parsing:
//
//   * discourse anchors ("Then", "After that", "Following that") are
//     stripped; if that leaves the sentence without a subject, the
//     prior sentence's subject(s) are duplicated in
//   * pronouns are replaced by their referents: singular pronouns
//     resolve to the most recent single-subject statement, plural
//     pronouns to the most recent statement's full subject list
//   * negation markers are removed from the text and recorded in the
//     sentence's negated flag; "n't" is also handled as a suffix
//   * questions get their wh word classified
//
// Unresolvable pronouns are reported through the warnings list and
// left in place, never guessed.  The pass is idempotent.

#include <string>
#include <vector>

#include "babi.hpp"
#include "lexicon.hpp"

namespace fabula {

namespace detail {

struct Word {
  std::string core;   // original case, punctuation stripped
  std::string punct;  // trailing punctuation, if any
  std::string low;    // lowercase core

  static Word make(const std::string& word) {
    Word t;
    size_t end = word.size();
    while (end > 0 && std::string(".,?!;:").find(word[end - 1]) != std::string::npos) --end;
    t.core = word.substr(0, end);
    t.punct = word.substr(end);
    t.low = lower(t.core);
    return t;
  }
};

inline std::vector<Word> tokenize(const std::string& text) {
  std::istringstream in(text);
  std::vector<Word> out;
  std::string w;
  while (in >> w) {
    Word t = Word::make(w);
    if (!t.core.empty() || !t.punct.empty()) out.push_back(t);
  }
  return out;
}

inline std::string join_tokens(const std::vector<Word>& tokens) {
  std::string out;
  for (const Word& t : tokens) {
    if (!out.empty()) out += ' ';
    out += t.core + t.punct;
  }
  return out;
}

}  // namespace detail

inline Story normalize(const Story& story, const Lexicon& lex,
                       std::vector<std::string>* warnings = nullptr) {
  using Token = detail::Word;
  Story out;
  std::string last_single;
  std::vector<std::string> last_group;
  auto warn = [&](const std::string& msg) {
    if (warnings) warnings->push_back(msg);
  };
  for (const Sentence& orig : story.sentences) {
    Sentence s = orig;
    std::vector<Token> toks = detail::tokenize(s.text);
    std::string where = "line " + std::to_string(s.line_id);

    bool anchored = false;
    if (!toks.empty() && toks[0].low == "then") {
      toks.erase(toks.begin());
      anchored = true;
    } else if (toks.size() >= 2 && (toks[0].low == "after" || toks[0].low == "following") &&
               toks[1].low == "that") {
      toks.erase(toks.begin(), toks.begin() + 2);
      anchored = true;
    }

    for (size_t i = 0; i < toks.size(); ++i) {
      if (!lex.pronouns.count(toks[i].low)) continue;
      bool plural = lex.plural_pronouns.count(toks[i].low) > 0;
      if (plural) {
        if (last_group.empty()) {
          warn(where + ": unresolved pronoun '" + toks[i].core + "'");
          continue;
        }
        std::string punct = toks[i].punct;
        std::vector<Token> repl;
        for (size_t k = 0; k < last_group.size(); ++k) {
          if (k) repl.push_back(Token::make("and"));
          repl.push_back(Token::make(last_group[k]));
        }
        repl.back().punct = punct;
        toks.erase(toks.begin() + i);
        toks.insert(toks.begin() + i, repl.begin(), repl.end());
        i += repl.size() - 1;
      } else {
        if (last_single.empty()) {
          warn(where + ": unresolved pronoun '" + toks[i].core + "'");
          continue;
        }
        std::string punct = toks[i].punct;
        toks[i] = Token::make(last_single);
        toks[i].punct = punct;
      }
    }

    if (anchored && !s.is_question && !toks.empty() && !lex.has_tag(toks[0].low, "nnp")) {
      std::vector<std::string> subjects =
          !last_group.empty() ? last_group
                              : (last_single.empty() ? std::vector<std::string>{}
                                                     : std::vector<std::string>{last_single});
      if (subjects.empty()) {
        warn(where + ": anchored sentence has no prior subject");
      } else {
        std::vector<Token> repl;
        for (size_t k = 0; k < subjects.size(); ++k) {
          if (k) repl.push_back(Token::make("and"));
          repl.push_back(Token::make(subjects[k]));
        }
        toks.insert(toks.begin(), repl.begin(), repl.end());
      }
    }

    for (const std::vector<std::string>& marker : lex.negations) {
      if (marker.size() == 1 && marker[0] == "n't") {
        for (Token& t : toks) {
          if (t.low.size() > 3 && t.low.substr(t.low.size() - 3) == "n't") {
            t.core = t.core.substr(0, t.core.size() - 3);
            t.low = t.low.substr(0, t.low.size() - 3);
            s.negated = true;
          }
        }
        continue;
      }
      for (size_t i = 0; i + marker.size() <= toks.size();) {
        bool hit = true;
        for (size_t k = 0; k < marker.size(); ++k) {
          if (toks[i + k].low != marker[k]) {
            hit = false;
            break;
          }
        }
        if (hit) {
          std::string punct = toks[i + marker.size() - 1].punct;
          toks.erase(toks.begin() + i, toks.begin() + marker.size() + i);
          if (!punct.empty() && i > 0 && i == toks.size()) toks[i - 1].punct += punct;
          s.negated = true;
        } else {
          ++i;
        }
      }
    }

    if (s.is_question && !toks.empty()) {
      static const std::set<std::string> wh = {"where", "what", "who", "when", "why"};
      if (wh.count(toks[0].low)) {
        s.wh = toks[0].low;
      } else if (toks.size() >= 2 && toks[0].low == "how" && toks[1].low == "many") {
        s.wh = "how_many";
      }
    }

    if (!s.is_question) {
      std::vector<std::string> subjects;
      size_t i = 0;
      while (i < toks.size() && lex.has_tag(toks[i].low, "nnp")) {
        subjects.push_back(toks[i].core);
        if (i + 2 < toks.size() && toks[i + 1].low == "and" &&
            lex.has_tag(toks[i + 2].low, "nnp")) {
          i += 2;
        } else {
          break;
        }
      }
      if (!subjects.empty()) {
        last_group = subjects;
        if (subjects.size() == 1) last_single = subjects[0];
      }
    }

    s.text = detail::join_tokens(toks);
    out.sentences.push_back(std::move(s));
  }
  return out;
}

}  // namespace fabula
