#include <algorithm>
#include <sstream>
#include <stdexcept>

#include "ceerlab/interpretation.hpp"

namespace ceerlab::interp {

using namespace logic;

CorpusSentence corpus_sentence(const std::string& text) {
  const auto colon = text.find(':');
  if (colon == std::string::npos) throw std::invalid_argument("corpus sentence without ':' : " + text);
  CorpusSentence out;
  out.text = text;
  F body = parse(text.substr(colon + 1));

  struct Binder {
    char q;
    std::string v;
    Nat k;
  };
  std::vector<Binder> prefix;
  std::stringstream items(text.substr(0, colon));
  std::string item;
  while (std::getline(items, item, ',')) {
    std::stringstream in(item);
    Binder b{};
    std::string q;
    if (!(in >> q >> b.v >> b.k) || q.size() != 1 || std::string("AEN").find(q[0]) == std::string::npos)
      throw std::invalid_argument("bad corpus binder '" + item + "'");
    b.q = q[0];
    prefix.push_back(b);
    out.bound = std::max(out.bound, b.k);
  }
  for (auto it = prefix.rbegin(); it != prefix.rend(); ++it) {
    switch (it->q) {
      case 'A': body = bounded_forall(it->v, it->k, body); break;
      case 'E': body = bounded_exists(it->v, it->k, body); break;
      default: body = exists(it->v, conj({arith_numeral(it->k, it->v), body})); break;
    }
  }
  if (!free_vars(body).empty()) throw std::invalid_argument("corpus sentence is not closed: " + text);
  out.sentence = body;
  return out;
}

std::vector<CorpusSentence> arithmetic_corpus() {
  static const char* const texts[] = {
      "N k 3, A x 3, E y 3 : x + y = k",
      "A x 3, E y 3 : x * y = x",
      "E x 3, A y 3 : x * y = x",
      "E x 3, A y 3 : x + y = y",
      "N k 3, E x 3 : x + x = k",
      "N k 2, E x 3 : x * x = k",
      "E x 2 : x * x = x & !(x + x = x)",
      "A x 3 : x * x = x -> x + x = x",
      "A x 3, A y 3, E z 3 : x + y = z",
      "A x 2, A y 1, E z 3 : x + y = z",
      "N k 3, E x 3, E y 3 : x * y = k & !(x = y)",
      "N k 2, E x 3, E y 3 : x * y = k & x = y",
      "A x 3, A y 3, A z 3 : x + y = z -> y + x = z",
      "A x 3, A y 3, A z 3 : x * y = z -> y * x = z",
      "N k 2, N o 1, E x 3, E y 3 : x + y = k & x * y = o",
      "N k 3, E x 3, E y 3 : x + y = k & x * y = k",
      "A x 3, E y 3 : y + y = x",
      "A x 3, E y 3 : x + x = y | y + y = x",
      "A x 1, E y 3 : x + x = y",
      "E x 3, E y 3, E z 3 : x * y = z & x + y = z & !(x + x = x)",
      "A x 3, A y 3, A z 3 : x * y = z & z + z = z -> x + x = x | y + y = y",
      "E x 3, E z 3 : x + x = z & x * x = z & !(x + x = x)",
      "A x 3 : x = x",
      "E x 3 : !(x = x)",
      "A x 3, A y 3 : x + y = x -> y + y = y",
      "E x 3, E y 3 : x + y = x & !(y + y = y)",
      "A x 3, E y 3 : x * y = y",
      "E x 2, A y 3 : x + y = y -> x * y = x",
      "A x 3, A y 3 : (exists z. x + z = y) | (exists z. y + z = x)",
      "A x 3, A y 3 : (exists z. x + z = y) & (exists z. y + z = x) -> x = y",
      "E x 3, E y 3 : (exists z. x + z = y) & (exists z. y + z = x) & !(x = y)",
      "E x 3, A y 3, E z 3 : x * z = y",
      "A x 3, E y 3, A z 3 : x + z = y -> z + z = z",
      "E x 3, A y 3 : exists z. y + z = x",
      "N k 3, N o 1, N t 2 : o + t = k",
      "N k 2, N t 3, E z 3 : k * t = z",
      "N o 1, A x 3, A y 3 : x + o = y -> !(x = y)",
      "N o 1, E x 3 : x + o = x",
  };
  std::vector<CorpusSentence> out;
  for (const char* t : texts) out.push_back(corpus_sentence(t));
  return out;
}

Nat corpus_fragment(const std::vector<CorpusSentence>& corpus) {
  Nat b = 1;
  for (const auto& s : corpus) b = std::max(b, s.bound);
  return 2 * b * b;
}

}  // namespace ceerlab::interp
