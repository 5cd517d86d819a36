#include "stutter/agreement.hpp"

#include <algorithm>
#include <set>
#include <tuple>

#include "stutter/unicode.hpp"

namespace stutter {
namespace {

using Error = AgreementError;

void require_binary(std::span<const std::uint8_t> v) {
  for (std::uint8_t x : v) {
    if (x > 1) throw Error(Error::Kind::InvalidLabel, "labels must be 0 or 1");
  }
}

std::string cluster_markup(const Segment& segment, const SemanticToken& token) {
  std::string out;
  for (std::size_t c = token.first_chunk; c < token.last_chunk; ++c) {
    if (!out.empty()) out.push_back(' ');
    out += serialize(segment.chunks[c]);
  }
  return out;
}

std::set<EventCode> cluster_codes(const Segment& segment, const SemanticToken& token) {
  std::set<EventCode> codes;
  for (const EventInstance& e : extract_events(segment, token.segment)) {
    if (e.chunk_index >= token.first_chunk && e.chunk_index < token.last_chunk) codes.insert(e.code);
  }
  return codes;
}

// Everything that must agree for two tokens to serialize identically.
using TokenKey = std::tuple<bool, std::optional<std::string>, std::string>;

TokenKey key_of(const Transcript& t, const SemanticToken& token) {
  const Segment& segment = t.segments[token.segment];
  return {token.starts_segment, token.starts_segment ? segment.speaker : std::nullopt,
          cluster_markup(segment, token)};
}

}  // namespace

std::vector<SemanticToken> semantic_tokens(const Transcript& transcript) {
  std::vector<SemanticToken> tokens;
  for (std::size_t s = 0; s < transcript.segments.size(); ++s) {
    const Segment& segment = transcript.segments[s];
    const std::size_t segment_begin = tokens.size();
    std::size_t pending = 0;
    for (std::size_t c = 0; c < segment.chunks.size(); ++c) {
      std::string text = to_semantic(segment.chunks[c]);
      if (text.empty()) continue;
      tokens.push_back({std::move(text), s, pending, c + 1, tokens.size() == segment_begin});
      pending = c + 1;
    }
    const std::size_t n = segment.chunks.size();
    if (tokens.size() == segment_begin) {
      tokens.push_back({"", s, 0, n, true});
    } else if (pending < n) {
      tokens.back().last_chunk = n;
    }
  }
  return tokens;
}

Alignment align_tokens(std::span<const std::string> a, std::span<const std::string> b) {
  const std::size_t n = a.size();
  const std::size_t m = b.size();
  std::vector<std::string> fa(n), fb(m);
  for (std::size_t i = 0; i < n; ++i) fa[i] = unicode::fold_case(a[i]);
  for (std::size_t j = 0; j < m; ++j) fb[j] = unicode::fold_case(b[j]);

  std::vector<std::size_t> dp((n + 1) * (m + 1));
  const auto at = [&](std::size_t i, std::size_t j) -> std::size_t& { return dp[i * (m + 1) + j]; };
  for (std::size_t i = 0; i <= n; ++i) at(i, 0) = i;
  for (std::size_t j = 0; j <= m; ++j) at(0, j) = j;
  for (std::size_t i = 1; i <= n; ++i) {
    for (std::size_t j = 1; j <= m; ++j) {
      const std::size_t diag = at(i - 1, j - 1) + (fa[i - 1] == fb[j - 1] ? 0 : 1);
      at(i, j) = std::min({diag, at(i, j - 1) + 1, at(i - 1, j) + 1});
    }
  }

  Alignment result;
  result.cost = at(n, m);
  std::size_t i = n;
  std::size_t j = m;
  while (i > 0 || j > 0) {
    if (i > 0 && j > 0) {
      const bool equal = fa[i - 1] == fb[j - 1];
      if (at(i, j) == at(i - 1, j - 1) + (equal ? 0 : 1)) {
        result.pairs.push_back({i - 1, j - 1});
        --i;
        --j;
        continue;
      }
    }
    if (j > 0 && at(i, j) == at(i, j - 1) + 1) {
      result.pairs.push_back({std::nullopt, j - 1});
      --j;
    } else {
      result.pairs.push_back({i - 1, std::nullopt});
      --i;
    }
  }
  std::reverse(result.pairs.begin(), result.pairs.end());
  return result;
}

Alignment align(const Transcript& a, const Transcript& b) {
  const auto texts = [](const Transcript& t) {
    std::vector<std::string> out;
    for (SemanticToken& token : semantic_tokens(t)) out.push_back(std::move(token.text));
    return out;
  };
  const auto ta = texts(a);
  const auto tb = texts(b);
  // Transcripts with no segments have no tokens at all.
  return align_tokens(ta, tb);
}

DiffReport diff(const Transcript& a, const Transcript& b) {
  const auto tokens_a = semantic_tokens(a);
  const auto tokens_b = semantic_tokens(b);
  std::vector<std::string> ta, tb;
  for (const auto& t : tokens_a) ta.push_back(t.text);
  for (const auto& t : tokens_b) tb.push_back(t.text);
  const Alignment alignment = align_tokens(ta, tb);

  DiffReport report;
  for (std::size_t k = 0; k < alignment.pairs.size(); ++k) {
    const AlignedPair& pair = alignment.pairs[k];
    std::optional<TokenKey> key_a, key_b;
    std::set<EventCode> codes_a, codes_b;
    if (pair.a) {
      const SemanticToken& token = tokens_a[*pair.a];
      key_a = key_of(a, token);
      codes_a = cluster_codes(a.segments[token.segment], token);
    }
    if (pair.b) {
      const SemanticToken& token = tokens_b[*pair.b];
      key_b = key_of(b, token);
      codes_b = cluster_codes(b.segments[token.segment], token);
    }
    if (key_a == key_b) continue;

    DiffEntry entry;
    entry.position = k;
    entry.a_token = pair.a;
    entry.b_token = pair.b;
    if (key_a) entry.a_markup = std::get<2>(*key_a);
    if (key_b) entry.b_markup = std::get<2>(*key_b);
    std::set_symmetric_difference(codes_a.begin(), codes_a.end(), codes_b.begin(), codes_b.end(),
                                  std::back_inserter(entry.differing_codes));
    report.entries.push_back(std::move(entry));
  }
  return report;
}

std::string render_diff(const DiffReport& report) {
  const auto shown = [](const std::optional<std::size_t>& token, const std::string& markup) {
    if (!token) return std::string("(gap)");
    return markup.empty() ? std::string("(empty)") : markup;
  };
  std::size_t width_a = std::string_view("annotation 1").size();
  std::size_t width_b = std::string_view("annotation 2").size();
  for (const DiffEntry& e : report.entries) {
    width_a = std::max(width_a, unicode::length(shown(e.a_token, e.a_markup)));
    width_b = std::max(width_b, unicode::length(shown(e.b_token, e.b_markup)));
  }
  const auto pad = [](std::string text, std::size_t width) {
    const std::size_t len = unicode::length(text);
    if (len < width) text.append(width - len, ' ');
    return text;
  };
  std::string out = pad("#", 5) + pad("annotation 1", width_a) + "  " +
                    pad("annotation 2", width_b) + "  differing codes\n";
  for (std::size_t i = 0; i < report.entries.size(); ++i) {
    const DiffEntry& e = report.entries[i];
    std::string codes;
    for (EventCode code : e.differing_codes) {
      if (!codes.empty()) codes += ", ";
      codes += name(code);
    }
    if (codes.empty()) codes = "(none)";
    out += pad("#" + std::to_string(i + 1), 5) + pad(shown(e.a_token, e.a_markup), width_a) +
           "  " + pad(shown(e.b_token, e.b_markup), width_b) + "  " + codes + "\n";
  }
  return out;
}

std::optional<double> cohen_kappa(std::span<const std::uint8_t> x, std::span<const std::uint8_t> y) {
  if (x.size() != y.size()) {
    throw Error(Error::Kind::LengthMismatch, "label vectors differ in length");
  }
  if (x.empty()) throw Error(Error::Kind::EmptyInput, "label vectors are empty");
  require_binary(x);
  require_binary(y);

  // kappa = (n*agree - S) / (n^2 - S) where S = n^2 * p_e, all integers.
  const auto n = static_cast<long long>(x.size());
  long long agree = 0, x1 = 0, y1 = 0;
  for (std::size_t i = 0; i < x.size(); ++i) {
    agree += x[i] == y[i];
    x1 += x[i];
    y1 += y[i];
  }
  const long long chance = x1 * y1 + (n - x1) * (n - y1);
  const long long denominator = n * n - chance;
  if (denominator == 0) return std::nullopt;
  return static_cast<double>(static_cast<long double>(n * agree - chance) /
                             static_cast<long double>(denominator));
}

std::optional<double> fleiss_kappa(const std::vector<std::vector<std::size_t>>& counts,
                                   std::size_t raters) {
  if (counts.empty()) throw Error(Error::Kind::EmptyInput, "no items to score");
  if (raters < 2) throw Error(Error::Kind::RowSumMismatch, "need at least two raters per item");
  const std::size_t categories = counts.front().size();
  if (categories < 2) throw Error(Error::Kind::RowSumMismatch, "need at least two categories");

  __extension__ typedef __int128 Wide;
  std::vector<Wide> totals(categories, 0);
  Wide squares = 0;
  for (std::size_t i = 0; i < counts.size(); ++i) {
    const auto& row = counts[i];
    if (row.size() != categories) {
      throw Error(Error::Kind::RowSumMismatch, "row " + std::to_string(i) + " has a different width");
    }
    std::size_t sum = 0;
    for (std::size_t j = 0; j < categories; ++j) {
      sum += row[j];
      totals[j] += row[j];
      squares += static_cast<Wide>(row[j]) * row[j];
    }
    if (sum != raters) {
      throw Error(Error::Kind::RowSumMismatch, "row " + std::to_string(i) + " sums to " +
                                                   std::to_string(sum) + ", expected " +
                                                   std::to_string(raters));
    }
  }
  // With A = sum n_ij^2 - N n, D = N n (n-1), T = sum_j total_j^2, M = (N n)^2:
  // P = A / D, Pe = T / M, kappa = (A M - T D) / (D (M - T)).
  const Wide items = static_cast<Wide>(counts.size());
  const Wide n = static_cast<Wide>(raters);
  const Wide a = squares - items * n;
  const Wide d = items * n * (n - 1);
  const Wide m = (items * n) * (items * n);
  Wide t = 0;
  for (Wide total : totals) t += total * total;
  if (m == t) return std::nullopt;
  const Wide numerator = a * m - t * d;
  const Wide denominator = d * (m - t);
  if (numerator == denominator) return 1.0;
  return static_cast<double>(static_cast<long double>(numerator) /
                             static_cast<long double>(denominator));
}

LabelVector majority_vote(std::span<const LabelVector> labels) {
  if (labels.empty()) throw Error(Error::Kind::EmptyInput, "no annotators");
  if (labels.size() % 2 == 0) {
    throw Error(Error::Kind::EvenAnnotatorCount,
                "majority vote needs an odd number of annotators, got " +
                    std::to_string(labels.size()));
  }
  const std::size_t length = labels.front().size();
  for (const LabelVector& v : labels) {
    if (v.size() != length) throw Error(Error::Kind::LengthMismatch, "label vectors differ in length");
    require_binary(v);
  }
  LabelVector out(length, 0);
  for (std::size_t i = 0; i < length; ++i) {
    std::size_t votes = 0;
    for (const LabelVector& v : labels) votes += v[i];
    out[i] = 2 * votes > labels.size() ? 1 : 0;
  }
  return out;
}

std::size_t percentage_hundredths(std::size_t count, std::size_t total) {
  if (total == 0) throw Error(Error::Kind::EmptyInput, "percentage over zero clips");
  return (2 * count * 10000 + total) / (2 * total);
}

std::string format_percentage(std::size_t hundredths) {
  std::string frac = std::to_string(hundredths % 100);
  if (frac.size() < 2) frac.insert(0, "0");
  return std::to_string(hundredths / 100) + "." + frac + "%";
}

std::size_t ConfusionTable::percentage_hundredths(EventCode code) const {
  return stutter::percentage_hundredths((*this)[code].disagreements(), total_clips);
}

ConfusionCell confusion_counts(std::span<const std::uint8_t> reference,
                               std::span<const std::uint8_t> candidate) {
  if (reference.size() != candidate.size()) {
    throw Error(Error::Kind::LengthMismatch, "reference and candidate differ in length");
  }
  require_binary(reference);
  require_binary(candidate);
  ConfusionCell cell;
  for (std::size_t i = 0; i < reference.size(); ++i) {
    const bool ref = reference[i] != 0;
    const bool cand = candidate[i] != 0;
    if (ref && cand) {
      ++cell.tp;
    } else if (ref) {
      ++cell.fn;
    } else if (cand) {
      ++cell.fp;
    } else {
      ++cell.tn;
    }
  }
  return cell;
}

LabelVector label_column(std::span<const ClipLabels> labels, EventCode code) {
  LabelVector out;
  out.reserve(labels.size());
  for (const ClipLabels& clip : labels) out.push_back(clip.has(code) ? 1 : 0);
  return out;
}

ConfusionTable confusion(std::span<const ClipLabels> reference, std::span<const ClipLabels> candidate) {
  if (reference.size() != candidate.size()) {
    throw Error(Error::Kind::LengthMismatch, "reference has " + std::to_string(reference.size()) +
                                                 " clips, candidate has " +
                                                 std::to_string(candidate.size()));
  }
  ConfusionTable table;
  table.total_clips = reference.size();
  for (EventCode code : kAllEventCodes) {
    table.cells[index_of(code)] =
        confusion_counts(label_column(reference, code), label_column(candidate, code));
  }
  return table;
}

namespace {

std::string display_name(EventCode code) {
  std::string out(name(code));
  std::replace(out.begin(), out.end(), '_', ' ');
  return out;
}

std::string right(const std::string& text, std::size_t width) {
  return text.size() >= width ? text : std::string(width - text.size(), ' ') + text;
}

}  // namespace

std::string render_confusion_text(const ConfusionTable& table) {
  std::string out = "code                     FN      FP   total        %\n";
  for (EventCode code : kReportOrder) {
    const ConfusionCell& cell = table[code];
    std::string label = display_name(code);
    label.resize(std::max<std::size_t>(label.size(), 18), ' ');
    out += label + right(std::to_string(cell.fn), 8) + right(std::to_string(cell.fp), 8) +
           right(std::to_string(cell.disagreements()), 8);
    out += table.total_clips == 0 ? right("n/a", 9)
                                  : right(format_percentage(table.percentage_hundredths(code)), 9);
    out += "\n";
  }
  out += "clips: " + std::to_string(table.total_clips) + "\n";
  return out;
}

std::string render_confusion_csv(const ConfusionTable& table) {
  std::string out = "code,tp,fp,fn,tn,total,percentage\n";
  for (EventCode code : kReportOrder) {
    const ConfusionCell& cell = table[code];
    std::string pct = table.total_clips == 0
                          ? std::string()
                          : format_percentage(table.percentage_hundredths(code));
    if (!pct.empty()) pct.pop_back();
    out += std::string(name(code)) + ',' + std::to_string(cell.tp) + ',' + std::to_string(cell.fp) +
           ',' + std::to_string(cell.fn) + ',' + std::to_string(cell.tn) + ',' +
           std::to_string(cell.disagreements()) + ',' + pct + '\n';
  }
  return out;
}

}  // namespace stutter
