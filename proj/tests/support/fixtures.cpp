#include "support/fixtures.hpp"

#include <array>
#include <random>

namespace ocrcheck::testfix {

namespace {

constexpr std::array<const char*, 36> kNouns = {
    "reactor", "membrane", "lattice", "gradient", "manifold", "turbine",
    "capacitor", "polymer", "electrode", "isotope", "catalyst", "resonator",
    "algorithm", "spectrum", "filament", "substrate", "enzyme", "conduit",
    "pendulum", "vortex", "antenna", "crystal", "compound", "detector",
    "aquifer", "glacier", "sediment", "nucleus", "protein", "neuron",
    "compiler", "dataset", "kernel", "pipeline", "tensor", "register",
};

constexpr std::array<const char*, 24> kVerbs = {
    "amplifies", "deflects", "stabilizes", "converges", "oscillates",
    "saturates", "degrades", "accelerates", "absorbs", "emits", "aligns",
    "diffuses", "propagates", "separates", "contracts", "expands",
    "calibrates", "measures", "samples", "filters", "encodes", "iterates",
    "anneals", "precipitates",
};

constexpr std::array<const char*, 20> kAdjectives = {
    "thermal", "composite", "anisotropic", "coherent", "turbulent", "viscous",
    "crystalline", "porous", "adaptive", "nonlinear", "residual", "ambient",
    "orthogonal", "ductile", "synthetic", "granular", "periodic", "latent",
    "convex", "stochastic",
};

constexpr std::array<const char*, 12> kMathSnippets = {
    "x^{2}+y_{1}",
    "\\frac{a+b}{c}",
    "\\sqrt{z+1}",
    "\\alpha+\\beta\\cdot\\gamma",
    "a_{i}+b_{j}",
    "\\sum x_{k}",
    "(m+n)^{3}",
    "\\frac{p}{q}-r",
    "u\\times v+w",
    "\\left(a+b\\right)^{2}",
    "\\sqrt[3]{q}+t",
    "e^{i\\pi}+1",
};

constexpr std::array<const char*, 3> kOutOfSubsetMath = {
    "\\begin{matrix}a&b\\\\c&d\\end{matrix}",
    "\\oint_{S} f \\, ds",
    "\\binom{n}{k}+m",
};

class Rng {
 public:
  explicit Rng(std::uint64_t seed) : gen_(seed) {}
  std::size_t below(std::size_t n) { return n == 0 ? 0 : gen_() % n; }
  bool chance(int percent) { return below(100) < static_cast<std::size_t>(percent); }

 private:
  std::mt19937_64 gen_;
};

std::string sentence(Rng& rng, int page, int serial) {
  std::string s = "The ";
  s += kAdjectives[rng.below(kAdjectives.size())];
  s += " ";
  s += kNouns[rng.below(kNouns.size())];
  s += " ";
  s += kVerbs[rng.below(kVerbs.size())];
  s += " the ";
  s += kAdjectives[rng.below(kAdjectives.size())];
  s += " ";
  s += kNouns[rng.below(kNouns.size())];
  int extra = static_cast<int>(rng.below(3));
  for (int i = 0; i < extra; ++i) {
    s += " and the ";
    s += kAdjectives[rng.below(kAdjectives.size())];
    s += " ";
    s += kNouns[rng.below(kNouns.size())];
  }
  s += " near station ";
  s += std::to_string(page);
  s += "-";
  s += std::to_string(serial);
  s += ".";
  return s;
}

std::string paragraph(Rng& rng, int page, int& serial, int sentences) {
  std::string p;
  for (int i = 0; i < sentences; ++i) {
    if (i) p += " ";
    p += sentence(rng, page, serial++);
  }
  return p;
}

std::string table_html(Rng& rng, int page, int table_index) {
  std::size_t rows = 3 + rng.below(3);
  std::size_t cols = 3 + rng.below(2);
  bool spanned = rng.chance(35);
  std::string html = "<table>\n<tr>";
  for (std::size_t c = 0; c < cols; ++c) {
    html += "<th>Head " + std::to_string(table_index) + "x" + std::to_string(c) + "</th>";
  }
  html += "</tr>\n";
  for (std::size_t r = 1; r < rows; ++r) {
    html += "<tr>";
    for (std::size_t c = 0; c < cols; ++c) {
      std::string value = "v" + std::to_string(page) + "t" + std::to_string(table_index) +
                          "r" + std::to_string(r) + "c" + std::to_string(c);
      if (spanned && r == 1 && c == 0) {
        html += "<td rowspan=\"2\">" + value + "</td>";
      } else if (spanned && r == 2 && c == 0) {
        // covered by the rowspan above
      } else if (spanned && r == 1 && c == 1 && cols > 2) {
        html += "<td colspan=\"2\">" + value + "</td>";
        ++c;  // the covered column
      } else {
        html += "<td>" + value + "</td>";
      }
    }
    html += "</tr>\n";
  }
  html += "</table>";
  return html;
}

}  // namespace

testgen::GroundTruthPage make_fixture_page(int index) {
  Rng rng(0x9E3779B97F4A7C15ull + static_cast<std::uint64_t>(index));
  int serial = 0;
  std::string html = "<!DOCTYPE html>\n<html>\n<head><title>Fixture</title></head>\n<body>\n";

  if (rng.chance(70)) {
    html += "<header>Journal of Synthetic Documents Volume " +
            std::to_string(1 + rng.below(40)) + " Issue " +
            std::to_string(1 + rng.below(12)) + " Annual Edition</header>\n";
  }

  html += "<h1>Study " + std::to_string(index) + " of the " +
          kAdjectives[rng.below(kAdjectives.size())] + " " +
          kNouns[rng.below(kNouns.size())] + "</h1>\n";

  int paragraphs = 3 + static_cast<int>(rng.below(3));
  bool used_figure = false;
  bool used_table = false;
  int table_index = 0;
  bool multi_column = rng.chance(30);

  if (multi_column) html += "<div class=\"columns\">\n<div class=\"column\">\n";

  for (int p = 0; p < paragraphs; ++p) {
    std::string body_par = paragraph(rng, index, serial, 2 + static_cast<int>(rng.below(3)));
    if (rng.chance(40)) {
      // inline emphasis and an inline math span mid-paragraph
      body_par += " The quantity <span class=\"math\">" +
                  std::string(kMathSnippets[rng.below(kMathSnippets.size())]) +
                  "</span> bounds the <b>" +
                  std::string(kNouns[rng.below(kNouns.size())]) + "</b> response near station " +
                  std::to_string(index) + "-" + std::to_string(serial++) + ".";
    }
    html += "<p>" + body_par + "</p>\n";

    if (multi_column && p == paragraphs / 2) {
      html += "</div>\n<div class=\"column\">\n";
    }
    if (!used_figure && rng.chance(45)) {
      used_figure = true;
      html += "<figure><img src=\"fig" + std::to_string(index) +
              ".png\"><figcaption>Figure " + std::to_string(1 + p) +
              " schematic of the " + kAdjectives[rng.below(kAdjectives.size())] + " " +
              kNouns[rng.below(kNouns.size())] + " assembly captured at station " +
              std::to_string(index) + "-" + std::to_string(serial++) +
              "</figcaption></figure>\n";
    }
    if (!used_table && rng.chance(45)) {
      used_table = true;
      html += table_html(rng, index, table_index++) + "\n";
    }
  }

  if (multi_column) html += "</div>\n</div>\n";

  if (rng.chance(75)) {
    html += "<div class=\"math display\">" +
            std::string(rng.chance(20)
                            ? kOutOfSubsetMath[rng.below(kOutOfSubsetMath.size())]
                            : kMathSnippets[rng.below(kMathSnippets.size())]) +
            "</div>\n";
  }
  if (!used_table && rng.chance(50)) {
    html += table_html(rng, index, table_index++) + "\n";
  }
  if (rng.chance(12)) {
    html += "<p>Η μελέτη δείχνει σταθερή απόκλιση στο σταθμό " + std::to_string(index) +
            " όπως αναμενόταν από την αρχική θεωρία.</p>\n";
  } else if (rng.chance(12)) {
    html += "<p>Исходная модель показывает устойчивое отклонение на станции " +
            std::to_string(index) + " как и предполагалось в начальной теории.</p>\n";
  }

  html += paragraph(rng, index, serial, 2).insert(0, "<p>").append("</p>\n");

  if (rng.chance(70)) {
    html += "<footer>Page " + std::to_string(1 + rng.below(30)) + " of " +
            std::to_string(31 + rng.below(30)) +
            " Annual Technical Review Series Collection</footer>\n";
  }
  html += "</body>\n</html>\n";

  testgen::GroundTruthPage page;
  page.doc_id = "fixture-" + std::string(index < 10 ? "00" : index < 100 ? "0" : "") +
                std::to_string(index);
  page.html = std::move(html);
  page.seed = testgen::derive_page_seed(0xABCDEF01ull, page.doc_id);
  return page;
}

std::vector<testgen::GroundTruthPage> make_fixture_corpus(int count) {
  std::vector<testgen::GroundTruthPage> corpus;
  corpus.reserve(static_cast<std::size_t>(count));
  for (int i = 0; i < count; ++i) corpus.push_back(make_fixture_page(i));
  return corpus;
}

}  // namespace ocrcheck::testfix
