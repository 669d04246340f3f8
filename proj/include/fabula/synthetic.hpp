#pragma once

// Seeded generators for story corpora in the four supported shapes:
//
//   1  movement stories with where-is questions
//   6  movement stories with is-in yes/no questions
//   9  adds placement and negation statements ("is in", "is not in",
//      "is no longer in"), yes/no questions
//   10 adds indefinite placements ("is either in ... or ..."), so
//      some answers are maybe
//
// Every generated question is answerable from the story alone.  The
// generator tracks a small world model (who is where, which
// placements are open or denied) and only asks questions whose
// answer that model determines, mirroring how the source corpora are
// built.

#include <cctype>
#include <map>
#include <optional>
#include <random>
#include <set>
#include <sstream>
#include <stdexcept>
#include <string>
#include <vector>

namespace fabula {

inline const char* kDefaultLexicon = R"(# tokens
nnp	mary
nnp	john
nnp	daniel
nnp	sandra
nnp	fred
nnp	bill
nnp	julie
nnp	jeff
nn	bathroom
nn	hallway
nn	kitchen
nn	bedroom
nn	garden
nn	office
nn	park
nn	school
nn	apple
nn	football
nn	milk
nn	objects
jj	hungry
jj	thirsty
jj	tired
jj	bored
pronoun	he
pronoun	she
pronoun	it
pronoun	they
pronoun	them
stop	the
stop	a
stop	an
stop	to
stop	back
stop	either
stop	there
time	yesterday
time	morning
time	afternoon
time	evening
# verb phrases are matched after stopword removal
verb	moved	go_to
verb	went	go_to
verb	travelled	go_to
verb	journeyed	go_to
verb	go	go_to
verb	is in	be
verb	are in	be
verb	was in	be
verb	is	be
verb	was	be
verb	got	got
verb	grabbed	got
verb	took	got
verb	picked up	got
verb	dropped	drop
verb	discarded	drop
verb	put down	drop
verb	is carrying	carry
verb	gave	give
verb	handed	give
verb	is afraid of	be_afraid_of
alias	be_in	be
)";

namespace detail {

struct SynthWorld {
  // definite location, open alternatives, denied locations; each with
  // the line id that justifies it
  std::map<std::string, std::pair<std::string, int>> loc;
  std::map<std::string, std::pair<std::set<std::string>, int>> alts;
  std::map<std::string, std::map<std::string, int>> denied;
  // places an actor provably left; questions probe these so that a
  // reasoner without movement-terminates-presence never scores 100%
  std::map<std::string, std::set<std::string>> former;

  void move(const std::string& actor, const std::string& place, int line) {
    if (loc.count(actor)) former[actor].insert(loc[actor].first);
    former[actor].erase(place);
    loc[actor] = {place, line};
    alts.erase(actor);
    denied[actor].erase(place);
  }
};

inline std::string cap(std::string s) {
  if (!s.empty()) s[0] = static_cast<char>(std::toupper(static_cast<unsigned char>(s[0])));
  return s;
}

}  // namespace detail

// One corpus in story file format.  task selects the statement and
// question mix as documented above.
inline std::string synthesize(int task, int stories, unsigned seed) {
  if (task != 1 && task != 6 && task != 9 && task != 10) {
    throw std::invalid_argument("synthesize: supported tasks are 1, 6, 9, 10");
  }
  std::mt19937 rng(seed * 131u + static_cast<unsigned>(task));
  const std::vector<std::string> actors = {"mary", "john",  "daniel", "sandra",
                                           "fred", "bill",  "julie",  "jeff"};
  const std::vector<std::string> places = {"bathroom", "hallway", "kitchen", "bedroom",
                                           "garden",   "office",  "park",    "school"};
  const std::vector<std::string> move_verbs = {"moved to", "went to", "travelled to",
                                               "journeyed to", "went back to"};
  auto pick = [&](const std::vector<std::string>& v) { return v[rng() % v.size()]; };

  std::ostringstream out;
  for (int story = 0; story < stories; ++story) {
    detail::SynthWorld world;
    std::vector<std::string> cast;
    {
      std::vector<std::string> shuffled = actors;
      for (size_t i = shuffled.size(); i > 1; --i) {
        std::swap(shuffled[i - 1], shuffled[rng() % i]);
      }
      size_t n = 3 + rng() % 2;
      cast.assign(shuffled.begin(), shuffled.begin() + n);
    }
    int line = 1;

    auto emit_move = [&](const std::string& actor) {
      std::string place = pick(places);
      while (world.loc.count(actor) && world.loc[actor].first == place) place = pick(places);
      out << line << ' ' << detail::cap(actor) << ' ' << pick(move_verbs) << " the " << place
          << ".\n";
      world.move(actor, place, line);
      ++line;
    };

    auto emit_statement = [&](const std::string& actor) {
      bool fresh = !world.loc.count(actor) && !world.alts.count(actor);
      unsigned r = rng() % 10;
      if (task == 9) {
        if (r == 6 && fresh) {
          std::string place = pick(places);
          out << line << ' ' << detail::cap(actor) << " is in the " << place << ".\n";
          world.move(actor, place, line);
          ++line;
          return;
        }
        if (r == 7 && world.loc.count(actor)) {
          std::string place = world.loc[actor].first;
          out << line << ' ' << detail::cap(actor) << " is no longer in the " << place << ".\n";
          world.loc.erase(actor);
          world.denied[actor][place] = line;
          ++line;
          return;
        }
        if (r >= 8) {
          std::string place = pick(places);
          while (world.loc.count(actor) && world.loc[actor].first == place) place = pick(places);
          out << line << ' ' << detail::cap(actor) << " is not in the " << place << ".\n";
          world.denied[actor][place] = line;
          ++line;
          return;
        }
      }
      if (task == 10 && r >= 6 && fresh) {
        std::string a = pick(places);
        std::string b = pick(places);
        while (b == a) b = pick(places);
        out << line << ' ' << detail::cap(actor) << " is either in the " << a << " or the " << b
            << ".\n";
        world.alts[actor] = {{a, b}, line};
        ++line;
        return;
      }
      emit_move(actor);
    };

    auto known = [&]() {
      std::vector<std::string> v;
      for (const std::string& a : cast) {
        if (world.loc.count(a) || world.alts.count(a) ||
            (task == 9 && world.denied.count(a) && !world.denied[a].empty())) {
          v.push_back(a);
        }
      }
      return v;
    };

    auto emit_question = [&]() {
      std::vector<std::string> pool = known();
      if (pool.empty()) return false;
      std::string actor = pool[rng() % pool.size()];
      if (task == 1) {
        if (!world.loc.count(actor)) return false;
        auto [place, support] = world.loc[actor];
        out << line << " Where is " << detail::cap(actor) << "?\t" << place << '\t' << support
            << "\n";
        ++line;
        return true;
      }
      // yes/no/maybe questions
      if (world.alts.count(actor)) {
        auto [alts, support] = world.alts[actor];
        bool yes_side = rng() % 2 == 0;
        std::string place;
        if (yes_side) {
          auto it = alts.begin();
          std::advance(it, rng() % alts.size());
          place = *it;
        } else {
          place = pick(places);
          while (alts.count(place)) place = pick(places);
        }
        out << line << " Is " << detail::cap(actor) << " in the " << place << "?\t"
            << (yes_side ? "maybe" : "no") << '\t' << support << "\n";
        ++line;
        return true;
      }
      if (world.loc.count(actor)) {
        auto [place, support] = world.loc[actor];
        if (rng() % 2 == 0) {
          out << line << " Is " << detail::cap(actor) << " in the " << place << "?\tyes\t"
              << support << "\n";
        } else {
          std::string other;
          const std::set<std::string>& left = world.former[actor];
          if (!left.empty() && rng() % 2 == 0) {
            auto it = left.begin();
            std::advance(it, rng() % left.size());
            other = *it;
          } else {
            other = pick(places);
            while (other == place) other = pick(places);
          }
          out << line << " Is " << detail::cap(actor) << " in the " << other << "?\tno\t"
              << support << "\n";
        }
        ++line;
        return true;
      }
      if (task == 9 && world.denied.count(actor) && !world.denied[actor].empty()) {
        auto it = world.denied[actor].begin();
        std::advance(it, rng() % world.denied[actor].size());
        out << line << " Is " << detail::cap(actor) << " in the " << it->first << "?\tno\t"
            << it->second << "\n";
        ++line;
        return true;
      }
      return false;
    };

    int statements = 0;
    int questions = 0;
    while (questions < 5) {
      if (statements >= 2 && statements % 2 == 0 && emit_question()) {
        ++questions;
        ++statements;  // keep the cadence moving
        continue;
      }
      emit_statement(cast[rng() % cast.size()]);
      ++statements;
    }
  }
  return out.str();
}

}  // namespace fabula
