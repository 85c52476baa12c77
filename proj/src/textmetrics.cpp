#include "regimecast/textmetrics.hpp"

#include <algorithm>
#include <cctype>
#include <filesystem>
#include <fstream>
#include <map>
#include <sstream>

#include "regimecast/csv.hpp"

namespace regimecast {

namespace {

Term t(std::string word) { return {word, {word}}; }
Term t(std::string label, std::vector<std::string> variants) { return {std::move(label), std::move(variants)}; }

DictionarySet build() {
  DictionarySet d;
  d.hawkish = {"hawkish",
               {t("alarm"), t("alarming"), t("dangerous"), t("worrisome"), t("concern"), t("warning"),
                t("overheating"), t("overshoot"), t("spiral"), t("ratchet"),
                t("accelerat(e/ing/ion)", {"accelerate", "accelerating", "acceleration"}),
                t("underestimat(e/ing)", {"underestimate", "underestimating"}),
                t("complacen(t/cy)", {"complacent", "complacency"}), t("risk to the upside"), t("upside risk"),
                t("too low"), t("behind the curve"), t("inflation problem")}};
  d.dovish = {"dovish",
              {t("benign"), t("modest"), t("moderate"), t("contained"), t("manageable"), t("normal"), t("calm"),
               t("controlled"), t("well-behaved"), t("well behaved"),
               t("reassur(e/ing)", {"reassure", "reassuring"}), t("downside risk"), t("risk to the downside"),
               t("overshoot unlikely"), t("return to"), t("normali(ze/zation)", {"normalize", "normalization"}),
               t("converge"), t("settle"), t("dissipat(e/ing)", {"dissipate", "dissipating"})}};
  d.hedging = {"hedging",
               {t("could"), t("might"), t("may"), t("perhaps"), t("possibly"), t("uncertain"), t("unclear"),
                t("depends"), t("if"), t("whether"), t("hard to say"), t("difficult to predict"), t("range of"),
                t("scenario"), t("on the other hand"), t("however"), t("but"), t("although"), t("not clear"),
                t("remain to be seen"), t("question")}};
  d.certainty = {"certainty",
                 {t("clearly"), t("certainly"), t("obvious"), t("undoubtedly"), t("no doubt"), t("confident"),
                  t("conviction"), t("strongly believe"), t("will definitely"), t("inevitable"),
                  t("unambiguous")}};
  d.forward = {"forward",
               {t("will"), t("expect"), t("forecast"),
                t("anticipat(e/ing/ion)", {"anticipate", "anticipating", "anticipation"}), t("project"),
                t("predict"), t("likely"), t("outlook"), t("going forward"), t("ahead"), t("coming months"),
                t("second half"), t("rest of"), t("by december"), t("by year-end"), t("by year end")}};
  d.backward = {"backward",
                {t("history"), t("historical"), t("past"), t("previously"),
                 t("in the 1970(s)", {"in the 1970", "in the 1970s"}),
                 t("in the 1980(s)", {"in the 1980", "in the 1980s"}), t("in 2008"), t("in 2009"), t("in 2010"),
                 t("in 2011"), t("great moderation"), t("great recession"), t("volcker"), t("burns"),
                 t("remember"), t("memory"), t("experienced"), t("lesson"), t("precedent"), t("analogy")}};
  d.seventies = {"seventies",
                 {t("1970"), t("1973"), t("1974"), t("opec"), t("oil shock"), t("stagflation"), t("volcker"),
                  t("burns")}};
  return d;
}

std::vector<std::string> split_words(const std::string& s) {
  std::vector<std::string> out;
  std::istringstream in(s);
  std::string w;
  while (in >> w) out.push_back(w);
  return out;
}

// Variants of one dictionary as token sequences, longest first.
std::vector<std::vector<std::string>> variant_tokens(const Dictionary& dict) {
  std::vector<std::vector<std::string>> v;
  for (const auto& term : dict.terms)
    for (const auto& var : term.variants) v.push_back(split_words(var));
  std::stable_sort(v.begin(), v.end(), [](const auto& a, const auto& b) { return a.size() > b.size(); });
  return v;
}

}  // namespace

const DictionarySet& default_dictionaries() {
  static const DictionarySet d = build();
  return d;
}

std::vector<std::string> tokenize(const std::string& text) {
  std::vector<std::string> tokens = split_words(text);
  for (auto& tok : tokens) {
    for (auto& c : tok) c = static_cast<char>(std::tolower(static_cast<unsigned char>(c)));
    std::size_t b = 0, e = tok.size();
    while (b < e && std::ispunct(static_cast<unsigned char>(tok[b]))) ++b;
    while (e > b && std::ispunct(static_cast<unsigned char>(tok[e - 1]))) --e;
    tok = tok.substr(b, e - b);
  }
  return tokens;
}

int count_matches(const std::vector<std::string>& tokens, const Dictionary& dict) {
  const auto variants = variant_tokens(dict);
  int count = 0;
  std::size_t i = 0;
  while (i < tokens.size()) {
    std::size_t advance = 1;
    for (const auto& v : variants) {
      if (i + v.size() > tokens.size()) continue;
      if (std::equal(v.begin(), v.end(), tokens.begin() + static_cast<std::ptrdiff_t>(i))) {
        ++count;
        advance = v.size();
        break;
      }
    }
    i += advance;
  }
  return count;
}

TextIndicators score_text(const std::string& text, const DictionarySet& d) {
  const auto tokens = tokenize(text);
  if (tokens.empty()) throw Error(Errc::EmptyText, "text has no words");
  TextIndicators out;
  out.word_count = static_cast<int>(tokens.size());
  const double scale = 1000.0 / out.word_count;
  auto c = [&](const Dictionary& dict) { return static_cast<double>(count_matches(tokens, dict)); };
  out.sentiment = (c(d.hawkish) - c(d.dovish)) * scale;
  out.uncertainty = (c(d.hedging) - c(d.certainty)) * scale;
  out.temporal = (c(d.forward) - c(d.backward)) * scale;
  out.seventies = c(d.seventies) * scale;
  return out;
}

std::vector<CellIndicators> aggregate_cells(const std::vector<ScoredRun>& scored) {
  std::map<std::pair<Persona, MonthDate>, CellIndicators> cells;
  std::map<std::pair<Persona, MonthDate>, double> words;
  for (const auto& s : scored) {
    auto& cell = cells[{s.run.persona, s.run.vintage}];
    cell.persona = s.run.persona;
    cell.vintage = s.run.vintage;
    cell.mean.sentiment += s.indicators.sentiment;
    cell.mean.uncertainty += s.indicators.uncertainty;
    cell.mean.temporal += s.indicators.temporal;
    cell.mean.seventies += s.indicators.seventies;
    words[{s.run.persona, s.run.vintage}] += s.indicators.word_count;
    ++cell.n_runs;
  }
  std::vector<CellIndicators> out;
  for (auto& [key, cell] : cells) {
    const double n = cell.n_runs;
    cell.mean.sentiment /= n;
    cell.mean.uncertainty /= n;
    cell.mean.temporal /= n;
    cell.mean.seventies /= n;
    cell.mean.word_count = static_cast<int>(std::lround(words[key] / n));
    out.push_back(cell);
  }
  return out;
}

std::vector<ScoredRun> score_runs(const std::vector<PersonaRun>& runs, const std::string& base_dir) {
  std::vector<ScoredRun> out;
  for (const auto& r : runs) {
    if (!r.text_path) continue;
    const auto path = std::filesystem::path(base_dir) / *r.text_path;
    std::ifstream in(path);
    if (!in) throw Error(Errc::FileNotFound, path.string());
    std::ostringstream ss;
    ss << in.rdbuf();
    out.push_back({r, score_text(ss.str())});
  }
  return out;
}

void write_cells_csv(std::ostream& os, const std::vector<CellIndicators>& cells) {
  os << "persona,vintage,sentiment,uncertainty,temporal,seventies,n_runs\n";
  for (const auto& c : cells)
    os << persona_name(c.persona) << ',' << c.vintage.str() << ',' << fmt_num(c.mean.sentiment) << ','
       << fmt_num(c.mean.uncertainty) << ',' << fmt_num(c.mean.temporal) << ',' << fmt_num(c.mean.seventies) << ','
       << c.n_runs << '\n';
}

}  // namespace regimecast
