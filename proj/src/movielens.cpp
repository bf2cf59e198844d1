#include "drsub/movielens.hpp"

#include <algorithm>
#include <fstream>
#include <map>
#include <sstream>
#include <unordered_map>
#include <unordered_set>

#include "drsub/rng.hpp"

namespace drsub {
namespace {

std::vector<std::string> split_double_colon(const std::string& line) {
  std::vector<std::string> parts;
  std::size_t pos = 0;
  while (true) {
    const std::size_t next = line.find("::", pos);
    if (next == std::string::npos) {
      parts.push_back(line.substr(pos));
      break;
    }
    parts.push_back(line.substr(pos, next - pos));
    pos = next + 2;
  }
  return parts;
}

std::string strip_cr(std::string s) {
  while (!s.empty() && (s.back() == '\r' || s.back() == '\n')) s.pop_back();
  return s;
}

int parse_int(const std::string& s, const char* file, long line_no) {
  try {
    std::size_t used = 0;
    const int v = std::stoi(s, &used);
    if (used != s.size()) throw std::invalid_argument("trailing characters");
    return v;
  } catch (const std::exception&) {
    throw Error(std::string(file) + " line " + std::to_string(line_no) +
                ": malformed integer field '" + s + "'");
  }
}

// top n keys by count descending, id ascending on ties
std::vector<int> top_by_count(const std::unordered_map<int, int>& counts, int n,
                              const char* what) {
  std::vector<std::pair<int, int>> items(counts.begin(), counts.end());
  std::sort(items.begin(), items.end(), [](const auto& a, const auto& b) {
    if (a.second != b.second) return a.second > b.second;
    return a.first < b.first;
  });
  if (static_cast<int>(items.size()) < n)
    throw Error(std::string("ingest_movielens: only ") + std::to_string(items.size()) +
                " " + what + " available, " + std::to_string(n) + " requested");
  std::vector<int> ids;
  ids.reserve(static_cast<std::size_t>(n));
  for (int i = 0; i < n; ++i) ids.push_back(items[static_cast<std::size_t>(i)].first);
  return ids;
}

}  // namespace

MovieLensExtract ingest_movielens(const std::string& ratings_path,
                                  const std::string& movies_path, int n_movies,
                                  int n_users, std::uint64_t seed) {
  if (n_movies < 1 || n_users < 1)
    throw ParamError("ingest_movielens: selection sizes must be >= 1");

  std::ifstream movies_in(movies_path);
  if (!movies_in) throw Error("ingest_movielens: cannot open " + movies_path);
  std::unordered_map<int, std::vector<std::string>> genre_table;
  {
    std::string line;
    long line_no = 0;
    while (std::getline(movies_in, line)) {
      ++line_no;
      line = strip_cr(line);
      if (line.empty()) continue;
      const auto parts = split_double_colon(line);
      if (parts.size() < 3)
        throw Error("movies file line " + std::to_string(line_no) +
                    ": expected MovieID::Title::Genres");
      const int movie = parse_int(parts.front(), "movies file", line_no);
      std::vector<std::string> genres;
      std::stringstream gs(parts.back());
      std::string g;
      while (std::getline(gs, g, '|'))
        if (!g.empty()) genres.push_back(g);
      genre_table[movie] = std::move(genres);
    }
  }

  struct RatingRec {
    int user, movie, rating;
  };
  std::vector<RatingRec> records;
  std::unordered_map<int, int> movie_counts;
  {
    std::ifstream in(ratings_path);
    if (!in) throw Error("ingest_movielens: cannot open " + ratings_path);
    std::string line;
    long line_no = 0;
    while (std::getline(in, line)) {
      ++line_no;
      line = strip_cr(line);
      if (line.empty()) continue;
      const auto parts = split_double_colon(line);
      if (parts.size() != 4)
        throw Error("ratings file line " + std::to_string(line_no) +
                    ": expected UserID::MovieID::Rating::Timestamp");
      RatingRec rec;
      rec.user = parse_int(parts[0], "ratings file", line_no);
      rec.movie = parse_int(parts[1], "ratings file", line_no);
      rec.rating = parse_int(parts[2], "ratings file", line_no);
      if (rec.rating < 1 || rec.rating > 5)
        throw Error("ratings file line " + std::to_string(line_no) +
                    ": rating outside {1..5}");
      records.push_back(rec);
      ++movie_counts[rec.movie];
    }
  }

  MovieLensExtract out;
  out.movie_ids = top_by_count(movie_counts, n_movies, "movies");
  std::unordered_map<int, int> movie_col;
  for (int j = 0; j < n_movies; ++j)
    movie_col[out.movie_ids[static_cast<std::size_t>(j)]] = j;

  std::unordered_map<int, int> user_counts;
  for (const RatingRec& r : records)
    if (movie_col.count(r.movie)) ++user_counts[r.user];
  out.user_ids = top_by_count(user_counts, n_users, "users");
  std::unordered_map<int, int> user_row;
  for (int i = 0; i < n_users; ++i) user_row[out.user_ids[static_cast<std::size_t>(i)]] = i;

  out.ratings = Mat::Zero(n_users, n_movies);
  for (const RatingRec& r : records) {
    const auto ui = user_row.find(r.user);
    const auto mj = movie_col.find(r.movie);
    if (ui == user_row.end() || mj == movie_col.end()) continue;
    out.ratings(ui->second, mj->second) = r.rating / 5.0;
  }

  out.genres.reserve(static_cast<std::size_t>(n_movies));
  for (int id : out.movie_ids) {
    const auto it = genre_table.find(id);
    out.genres.push_back(it == genre_table.end() ? std::vector<std::string>{}
                                                 : it->second);
  }

  const auto share_genre = [&](int i, int j) {
    for (const std::string& g : out.genres[static_cast<std::size_t>(i)])
      for (const std::string& h : out.genres[static_cast<std::size_t>(j)])
        if (g == h) return true;
    return false;
  };
  out.thetas.reserve(static_cast<std::size_t>(n_users));
  for (int u = 0; u < n_users; ++u) {
    Rng rng(derive_seed(seed, static_cast<std::uint64_t>(u)));
    Mat theta = Mat::Zero(n_movies, n_movies);
    for (int i = 0; i < n_movies; ++i)
      for (int j = i + 1; j < n_movies; ++j)
        if (share_genre(i, j)) {
          const double v = -rng.uniform01();
          theta(i, j) = v;
          theta(j, i) = v;
        }
    out.thetas.push_back(std::move(theta));
  }
  return out;
}

std::vector<std::shared_ptr<const ObjectiveFunction>> movielens_functions(
    const MovieLensExtract& extract, double scale) {
  std::vector<std::shared_ptr<const ObjectiveFunction>> fs;
  const int T = static_cast<int>(extract.ratings.rows());
  fs.reserve(static_cast<std::size_t>(T));
  for (int u = 0; u < T; ++u)
    fs.push_back(std::make_shared<LogDiversityUtility>(
        Vec(extract.ratings.row(u).transpose()), extract.thetas[static_cast<std::size_t>(u)],
        scale));
  return fs;
}

}  // namespace drsub
