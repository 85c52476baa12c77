#pragma once

#include <iosfwd>
#include <string>
#include <vector>

#include "regimecast/experience.hpp"

namespace regimecast {

/// One dictionary entry. A stem pattern such as accelerat(e/ing/ion) is a
/// single term with several spelled-out variants.
struct Term {
  std::string label;
  std::vector<std::string> variants;
};

struct Dictionary {
  std::string name;
  std::vector<Term> terms;
};

/// hawkish, dovish, hedging, certainty, forward, backward, seventies.
struct DictionarySet {
  Dictionary hawkish, dovish, hedging, certainty, forward, backward, seventies;
};

const DictionarySet& default_dictionaries();

struct TextIndicators {
  double sentiment = 0.0;
  double uncertainty = 0.0;
  double temporal = 0.0;
  double seventies = 0.0;
  int word_count = 0;
};

/// Lowercased whitespace tokens with punctuation trimmed from both ends.
/// Tokens that are pure punctuation are kept as empty strings so the word
/// count stays the whitespace-token count.
std::vector<std::string> tokenize(const std::string& text);

/// Greedy left-to-right, longest-variant-first, non-overlapping matches of
/// the dictionary in the token stream.
int count_matches(const std::vector<std::string>& tokens, const Dictionary& dict);

TextIndicators score_text(const std::string& text, const DictionarySet& dicts = default_dictionaries());

struct ScoredRun {
  PersonaRun run;
  TextIndicators indicators;
};

struct CellIndicators {
  Persona persona = Persona::Neutral;
  MonthDate vintage;
  TextIndicators mean;  ///< word_count holds the mean word count, rounded
  int n_runs = 0;
};

/// Cell means by (persona, vintage), ordered by persona then vintage.
std::vector<CellIndicators> aggregate_cells(const std::vector<ScoredRun>& scored);

/// Scores every run that has a text; paths resolve against `base_dir`.
std::vector<ScoredRun> score_runs(const std::vector<PersonaRun>& runs, const std::string& base_dir);

/// persona,vintage,sentiment,uncertainty,temporal,seventies,n_runs
void write_cells_csv(std::ostream& os, const std::vector<CellIndicators>& cells);

}  // namespace regimecast
