#include "teletype/sim/generator.hpp"

#include <fmt/format.h>

#include <algorithm>
#include <cmath>
#include <map>
#include <random>
#include <set>
#include <stdexcept>

#include "teletype/privacy.hpp"

namespace teletype::sim {

namespace {

enum class NameKind { Number, Table, Opaque };

struct Line {
  std::string text;
  std::string declares;  // empty when the line binds nothing
  NameKind kind = NameKind::Opaque;
  std::vector<std::string> fields;  // of a declared table
  std::set<std::string> uses;
};

struct Module {
  std::string id;
  std::vector<Line> lines;  // lines[0] is the pragma
};

class Generator {
 public:
  Generator(std::uint64_t seed, const GeneratorParams& params) : rng_(seed), params_(params) {}

  Scenario run() {
    Scenario s;
    s.start_ms = kDefaultStartMs + static_cast<std::int64_t>(rng_() % (7 * 24)) * 3'600'000 +
                 static_cast<std::int64_t>(rng_() % 3'600'000);
    for (int i = 0; i < 3; ++i) s.project.data_model.insert(fresh_name(true));
    assets_.assign(s.project.data_model.begin(), s.project.data_model.end());

    for (int m = 0; m < params_.n_modules; ++m) {
      Module mod;
      mod.id = fresh_name(true) + fresh_name(true);
      mod.lines.push_back({pragma(draw_mode()), {}, NameKind::Opaque, {}, {}});
      modules_.push_back(std::move(mod));
      const int body = 3 + static_cast<int>(rng_() % 6);
      for (int k = 0; k < body; ++k) {
        auto& lines = modules_.back().lines;
        auto pos = static_cast<int>(lines.size());
        lines.push_back(statement(modules_.size() - 1, pos));
      }
    }
    for (const auto& mod : modules_) {
      std::vector<std::string> text;
      for (const auto& l : mod.lines) text.push_back(l.text);
      s.project.add_module(mod.id, std::move(text));
    }
    if (modules_.empty()) return s;

    std::size_t focus = 0;
    s.actions.push_back(OpenAction{modules_[focus].id});
    while (static_cast<int>(s.actions.size()) < params_.n_actions) {
      const double u = unit();
      Module& mod = modules_[focus];
      if (u < 0.06 && modules_.size() > 1) {
        std::size_t next = rng_() % (modules_.size() - 1);
        focus = next >= focus ? next + 1 : next;
        s.actions.push_back(SwitchAction{modules_[focus].id});
      } else if (u < 0.09) {
        const Mode mode = draw_mode();
        mod.lines[0].text = pragma(mode);
        s.actions.push_back(SetModeAction{mod.id, mode});
      } else if (u < 0.11) {
        // Mostly short pauses, sometimes long enough to cross hours.
        const std::int64_t ms = unit() < 0.7 ? 1'000 + static_cast<std::int64_t>(rng_() % 60'000)
                                             : 600'000 + static_cast<std::int64_t>(rng_() % 3'600'000);
        s.actions.push_back(WaitAction{ms});
      } else if (u < 0.35 && delete_line(mod, s)) {
      } else {
        const int pos = 1 + static_cast<int>(rng_() % mod.lines.size());
        Line line = statement(focus, pos);
        s.actions.push_back(TypeAction{mod.id, pos + 1, line.text});
        mod.lines.insert(mod.lines.begin() + pos, std::move(line));
      }
    }
    return s;
  }

 private:
  double unit() { return std::uniform_real_distribution<double>(0.0, 1.0)(rng_); }

  Mode draw_mode() {
    const double u = unit();
    const auto& mix = params_.mode_mix;
    if (u < mix[0]) return Mode::NoCheck;
    if (u < mix[0] + mix[1]) return Mode::NonStrict;
    return Mode::Strict;
  }

  static std::string pragma(Mode mode) { return fmt::format("--!{}", to_string(mode)); }

  // Pronounceable names that never occur inside the wire vocabulary.
  std::string fresh_name(bool capital) {
    static constexpr std::string_view kOnset = "bfgjkzvwxhqy";
    static constexpr std::string_view kVowel = "aeiou";
    for (;;) {
      std::string name;
      const int syllables = 2 + static_cast<int>(rng_() % 2);
      for (int i = 0; i < syllables; ++i) {
        name += kOnset[rng_() % kOnset.size()];
        name += kVowel[rng_() % kVowel.size()];
      }
      if (capital) name[0] = static_cast<char>(name[0] - 'a' + 'A');
      bool clash = used_.contains(name);
      for (const auto& word : wire_vocabulary()) clash = clash || word.find(name) != std::string::npos;
      if (clash) continue;
      used_.insert(name);
      return name;
    }
  }

  int literal() { return static_cast<int>(rng_() % 1000); }

  // Names declared in `mod` above line index `pos`.
  std::vector<const Line*> visible(const Module& mod, int pos, NameKind kind) const {
    std::vector<const Line*> out;
    for (int i = 0; i < pos; ++i) {
      if (!mod.lines[i].declares.empty() && mod.lines[i].kind == kind) out.push_back(&mod.lines[i]);
    }
    return out;
  }

  template <class T>
  const T& pick(const std::vector<T>& v) {
    return v[rng_() % v.size()];
  }

  Line statement(std::size_t module_index, int pos) {
    const Module& mod = modules_[module_index];
    const auto numbers = visible(mod, pos, NameKind::Number);
    const auto tables = visible(mod, pos, NameKind::Table);
    if (unit() < params_.typo_rate) return typo(numbers, tables);

    Line l;
    switch (rng_() % 7) {
      case 0:
        if (!numbers.empty()) {
          const auto& a = pick(numbers)->declares;
          l.declares = fresh_name(false);
          l.kind = NameKind::Number;
          l.uses = {a};
          l.text = fmt::format("local {} = {} + {}", l.declares, a, literal());
          return l;
        }
        break;
      case 1:
        if (!tables.empty()) {
          const Line* t = pick(tables);
          l.declares = fresh_name(false);
          l.kind = NameKind::Number;
          l.uses = {t->declares};
          l.text = fmt::format("local {} = {}.{}", l.declares, t->declares, pick(t->fields));
          return l;
        }
        break;
      case 2:
        if (!numbers.empty()) {
          const auto& a = pick(numbers)->declares;
          l.uses = {a};
          l.text = fmt::format("print({})", a);
          return l;
        }
        break;
      case 3: {
        l.declares = fresh_name(false);
        l.kind = NameKind::Table;
        l.fields = {fresh_name(false), fresh_name(false)};
        l.text = fmt::format("local {} = {{ {} = {}, {} = {} }}", l.declares, l.fields[0], literal(),
                             l.fields[1], literal());
        return l;
      }
      case 4: {
        l.declares = fresh_name(false);
        l.text = fmt::format("local {} = game.{}", l.declares, pick(assets_));
        return l;
      }
      case 5:
        if (module_index > 0) {
          l.declares = fresh_name(false);
          l.text = fmt::format("local {} = require(\"{}\")", l.declares,
                               modules_[rng_() % module_index].id);
          return l;
        }
        break;
      default:
        break;
    }
    l.declares = fresh_name(false);
    l.kind = NameKind::Number;
    l.text = fmt::format("local {} = {}", l.declares, literal());
    return l;
  }

  Line typo(const std::vector<const Line*>& numbers, const std::vector<const Line*>& tables) {
    Line l;
    switch (rng_() % 4) {
      case 0:
        if (!tables.empty()) {
          const Line* t = pick(tables);
          l.uses = {t->declares};
          l.text = fmt::format("local {} = {}.{}", fresh_name(false), t->declares, fresh_name(false));
          return l;
        }
        break;
      case 1:
        if (!tables.empty()) {
          const Line* t = pick(tables);
          l.uses = {t->declares};
          l.text = fmt::format("local {} = {} + {}", fresh_name(false), t->declares, literal());
          return l;
        }
        break;
      case 2:
        l.text = fmt::format("local {} =", fresh_name(false));
        return l;
      default:
        break;
    }
    (void)numbers;
    l.text = fmt::format("print({})", fresh_name(false));
    return l;
  }

  bool delete_line(Module& mod, Scenario& s) {
    std::vector<int> candidates;
    for (int i = 1; i < static_cast<int>(mod.lines.size()); ++i) {
      const auto& name = mod.lines[i].declares;
      const bool used = !name.empty() && std::any_of(mod.lines.begin(), mod.lines.end(),
                                                      [&](const Line& l) { return l.uses.contains(name); });
      if (!used) candidates.push_back(i);
    }
    if (candidates.empty()) return false;
    const int i = pick(candidates);
    mod.lines.erase(mod.lines.begin() + i);
    s.actions.push_back(DeleteAction{mod.id, i + 1, 1});
    return true;
  }

  std::mt19937_64 rng_;
  GeneratorParams params_;
  std::vector<Module> modules_;
  std::vector<std::string> assets_;
  std::set<std::string> used_;
};

}  // namespace

Scenario gen_random_scenario(std::uint64_t seed, const GeneratorParams& params) {
  const auto& mix = params.mode_mix;
  const bool mix_ok = std::all_of(mix.begin(), mix.end(), [](double p) { return p >= 0 && p <= 1; }) &&
                      std::abs(mix[0] + mix[1] + mix[2] - 1.0) < 1e-9;
  if (params.n_modules < 0 || params.n_actions < 0 || !mix_ok || params.typo_rate < 0 ||
      params.typo_rate > 1) {
    throw std::invalid_argument("invalid generator parameters");
  }
  return Generator(seed, params).run();
}

}  // namespace teletype::sim
