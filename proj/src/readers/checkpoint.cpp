#include <fstream>
#include <iomanip>
#include <sstream>

#include "recam/error.hpp"
#include "recam/readers/model.hpp"

namespace recam::readers {

// Text format:
//   recam-reader 1
//   variant <ga|att|amwg>
//   shape <hidden> <hops> <text_dim>
//   vocab <n>          then n words, one per line
//   gloss_vocab <m>    then m tokens, one per line
//   gloss_ids          then n lines of space-separated ids (AMWG only)
//   vocab_hash <hex>
//   <param> <rows> <cols> followed by rows
void ReaderModel::save(const std::filesystem::path& file) const {
  std::ofstream out(file);
  if (!out) throw ResourceError("cannot write reader checkpoint: " + file.string());
  out << "recam-reader 1\n";
  out << "variant " << variant_name(variant_) << '\n';
  out << "shape " << shape_.hidden << ' ' << shape_.hops << ' ' << text_->dim() << '\n';
  out << "vocab " << vocab_.size() << '\n';
  for (const auto& w : vocab_) out << w << '\n';
  out << "gloss_vocab " << gloss_vocab_.size() << '\n';
  for (const auto& w : gloss_vocab_) out << w << '\n';
  if (variant_ == Variant::kAmwg) {
    out << "gloss_ids\n";
    for (const auto& ids : vocab_gloss_ids_) {
      for (std::size_t i = 0; i < ids.size(); ++i) out << (i ? " " : "") << ids[i];
      out << '\n';
    }
  }
  out << "vocab_hash " << vocab_hash() << '\n';
  out << std::setprecision(17);
  for (const nn::Param* p : parameters()) {
    out << p->name << ' ' << p->value.rows() << ' ' << p->value.cols() << '\n';
    for (Eigen::Index r = 0; r < p->value.rows(); ++r) {
      for (Eigen::Index c = 0; c < p->value.cols(); ++c) out << (c ? " " : "") << p->value(r, c);
      out << '\n';
    }
  }
  if (!out) throw ResourceError("failed writing reader checkpoint: " + file.string());
}

namespace {

struct LineReader {
  std::istream& in;
  std::string name;
  std::size_t line = 0;

  std::string next() {
    std::string s;
    if (!std::getline(in, s)) throw ParseError(name, line + 1, "unexpected end of checkpoint");
    ++line;
    if (!s.empty() && s.back() == '\r') s.pop_back();
    return s;
  }
  std::istringstream fields(std::string_view tag) {
    std::istringstream ss(next());
    std::string t;
    ss >> t;
    if (t != tag) throw ParseError(name, line, "expected '" + std::string(tag) + "'");
    return ss;
  }
};

}  // namespace

ReaderModel ReaderModel::load(const std::filesystem::path& file, std::shared_ptr<const EmbeddingTable> text,
                              GlossFn gloss) {
  std::ifstream in(file);
  if (!in) throw ResourceError("cannot open reader checkpoint: " + file.string());
  if (!text) throw ValidationError("reader checkpoint needs a text embedding table");
  LineReader lr{in, file.string()};
  if (lr.next() != "recam-reader 1") throw ParseError(lr.name, 1, "not a recam-reader v1 checkpoint");

  ReaderModel m;
  std::string v;
  lr.fields("variant") >> v;
  m.variant_ = parse_variant(v);
  Eigen::Index dim = 0;
  {
    auto ss = lr.fields("shape");
    if (!(ss >> m.shape_.hidden >> m.shape_.hops >> dim) || m.shape_.hidden <= 0 || m.shape_.hops <= 0) {
      throw ParseError(lr.name, lr.line, "bad shape");
    }
  }
  if (dim != text->dim()) {
    throw ValidationError("checkpoint expects " + std::to_string(dim) + "-d embeddings, table has " +
                              std::to_string(text->dim()),
                          "dim_mismatch");
  }
  std::size_t n = 0;
  if (!(lr.fields("vocab") >> n) || n == 0) throw ParseError(lr.name, lr.line, "bad vocab header");
  for (std::size_t i = 0; i < n; ++i) m.vocab_.push_back(lr.next());
  std::size_t g = 0;
  if (!(lr.fields("gloss_vocab") >> g)) throw ParseError(lr.name, lr.line, "bad gloss_vocab header");
  for (std::size_t i = 0; i < g; ++i) m.gloss_vocab_.push_back(lr.next());
  std::vector<std::vector<Eigen::Index>> ids;
  if (m.variant_ == Variant::kAmwg) {
    lr.fields("gloss_ids");
    for (std::size_t i = 0; i < n; ++i) {
      std::istringstream ss(lr.next());
      std::vector<Eigen::Index> row;
      Eigen::Index id = 0;
      while (ss >> id) {
        if (id < 0 || id > static_cast<Eigen::Index>(g)) throw ParseError(lr.name, lr.line, "gloss id out of range");
        row.push_back(id);
      }
      ids.push_back(std::move(row));
    }
  }
  std::string hash;
  lr.fields("vocab_hash") >> hash;

  m.text_ = std::move(text);
  m.gloss_fn_ = std::move(gloss);
  m.build(0);
  if (m.variant_ == Variant::kAmwg) m.vocab_gloss_ids_ = std::move(ids);
  if (m.vocab_hash() != hash) throw ValidationError("checkpoint vocabulary hash mismatch", "vocab_hash");

  for (nn::Param* p : m.parameters()) {
    std::string tag;
    Eigen::Index rows = 0, cols = 0;
    {
      std::istringstream ss(lr.next());
      if (!(ss >> tag >> rows >> cols) || tag != p->name || rows != p->value.rows() || cols != p->value.cols()) {
        throw ParseError(lr.name, lr.line, "bad block header for " + p->name);
      }
    }
    for (Eigen::Index r = 0; r < rows; ++r) {
      std::istringstream ss(lr.next());
      for (Eigen::Index c = 0; c < cols; ++c) {
        if (!(ss >> p->value(r, c))) throw ParseError(lr.name, lr.line, "truncated row in " + p->name);
      }
    }
  }
  return m;
}

}  // namespace recam::readers
