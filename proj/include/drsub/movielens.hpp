#pragma once

#include <cstdint>
#include <memory>
#include <string>
#include <vector>

#include "drsub/common.hpp"
#include "drsub/objective.hpp"

namespace drsub {

// Slice of a MovieLens-1M dump prepared for the recommendation experiment:
// the n most-rated movies as columns, the T most-active users (over those
// movies) as rows/rounds, ratings rescaled to [0,1] with unrated entries 0,
// and one diversity-penalty matrix per user (theta_ij uniform in [-1,0] when
// movies i and j share a genre, 0 otherwise).
struct MovieLensExtract {
  std::vector<int> movie_ids;  // column order
  std::vector<int> user_ids;   // row/round order
  Mat ratings;                 // n_users x n_movies, entries in [0,1]
  std::vector<std::vector<std::string>> genres;  // per selected movie
  std::vector<Mat> thetas;                       // per selected user
};

// parses `UserID::MovieID::Rating::Timestamp` and `MovieID::Title::Genres`
// records; ties in the popularity rankings break toward the smaller id
MovieLensExtract ingest_movielens(const std::string& ratings_path,
                                  const std::string& movies_path, int n_movies,
                                  int n_users, std::uint64_t seed);

// one log-diversity utility per user row, in row order
std::vector<std::shared_ptr<const ObjectiveFunction>> movielens_functions(
    const MovieLensExtract& extract, double scale = 5.0);

}  // namespace drsub
