#pragma once

// Loader for the line-numbered story format:
//
//   1 Mary moved to the bathroom.
//   2 John went to the hallway.
//   3 Where is Mary?<TAB>bathroom<TAB>1
//
// A line number of 1 starts a new story.  Question lines carry two
// tab-separated extra fields: the answer (comma separated when there
// is more than one) and the whitespace-separated ids of supporting
// lines.  Statements advance the story clock; questions are asked one
// tick after the latest statement and do not advance it.

#include <cctype>
#include <fstream>
#include <sstream>
#include <stdexcept>
#include <string>
#include <vector>

namespace fabula {

struct BabiError : std::runtime_error {
  explicit BabiError(const std::string& msg) : std::runtime_error(msg) {}
};

struct AnswerKey {
  std::vector<std::string> answers;
  std::vector<int> supporting;
};

struct Sentence {
  int index = 0;    // story clock: statement time, or ask time for questions
  int line_id = 0;  // the number at the front of the line
  std::string text;
  bool is_question = false;
  bool negated = false;  // set by normalize()
  std::string wh;        // where|what|who|when|why|how_many, empty otherwise
  AnswerKey answer;      // questions only
};

struct Story {
  std::vector<Sentence> sentences;

  int horizon() const {
    int last = 0;
    for (const Sentence& s : sentences) {
      if (!s.is_question && s.index > last) last = s.index;
    }
    return last + 1;
  }
};

namespace detail {

inline std::string trim(const std::string& s) {
  size_t b = s.find_first_not_of(" \t\r\n");
  if (b == std::string::npos) return "";
  size_t e = s.find_last_not_of(" \t\r\n");
  return s.substr(b, e - b + 1);
}

inline std::vector<std::string> split(const std::string& s, char sep) {
  std::vector<std::string> out;
  std::string cur;
  for (char c : s) {
    if (c == sep) {
      out.push_back(cur);
      cur.clear();
    } else {
      cur += c;
    }
  }
  out.push_back(cur);
  return out;
}

inline std::string lower(std::string s) {
  for (char& c : s) c = static_cast<char>(std::tolower(static_cast<unsigned char>(c)));
  return s;
}

}  // namespace detail

inline std::vector<Story> load_babi(const std::string& text) {
  std::vector<Story> stories;
  Story cur;
  int clock = 0;
  int prev_id = 0;
  int file_line = 0;
  std::istringstream in(text);
  std::string raw;
  auto flush = [&] {
    if (!cur.sentences.empty()) stories.push_back(std::move(cur));
    cur = Story{};
    clock = 0;
    prev_id = 0;
  };
  while (std::getline(in, raw)) {
    ++file_line;
    std::string line = detail::trim(raw);
    if (line.empty()) continue;
    size_t sp = line.find(' ');
    if (sp == std::string::npos) {
      throw BabiError("line " + std::to_string(file_line) + ": missing text after id");
    }
    int id = 0;
    try {
      size_t used = 0;
      id = std::stoi(line.substr(0, sp), &used);
      if (used != sp) throw std::invalid_argument("trailing");
    } catch (const std::exception&) {
      throw BabiError("line " + std::to_string(file_line) + ": expected numeric id, got '" +
                      line.substr(0, sp) + "'");
    }
    if (id == 1) {
      flush();
    } else if (id <= prev_id) {
      throw BabiError("line " + std::to_string(file_line) + ": id " + std::to_string(id) +
                      " does not increase (previous " + std::to_string(prev_id) + ")");
    }
    prev_id = id;
    std::string rest = line.substr(sp + 1);
    std::vector<std::string> parts = detail::split(rest, '\t');
    Sentence s;
    s.line_id = id;
    if (parts.size() == 1) {
      s.text = detail::trim(parts[0]);
      s.index = ++clock;
    } else if (parts.size() == 3) {
      s.is_question = true;
      s.text = detail::trim(parts[0]);
      s.index = clock + 1;
      for (const std::string& a : detail::split(parts[1], ',')) {
        std::string v = detail::lower(detail::trim(a));
        if (!v.empty()) s.answer.answers.push_back(v);
      }
      if (s.answer.answers.empty()) {
        throw BabiError("line " + std::to_string(file_line) + ": question has no answer");
      }
      std::istringstream ss(parts[2]);
      int sup = 0;
      while (ss >> sup) s.answer.supporting.push_back(sup);
    } else {
      throw BabiError("line " + std::to_string(file_line) + ": expected 1 or 3 tab fields, got " +
                      std::to_string(parts.size()));
    }
    if (s.text.empty()) {
      throw BabiError("line " + std::to_string(file_line) + ": empty sentence");
    }
    cur.sentences.push_back(std::move(s));
  }
  flush();
  return stories;
}

inline std::vector<Story> load_babi_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw BabiError("cannot open " + path);
  std::ostringstream buf;
  buf << in.rdbuf();
  return load_babi(buf.str());
}

}  // namespace fabula
