#include <exception>

#include "scottlab/efgame.hpp"

namespace scottlab {

namespace {

bool skipped(const std::vector<std::vector<char>>& skip, std::size_t i, std::size_t j) {
  return !skip.empty() && skip[i][j];
}

}  // namespace

WinnerMatrix winnerMatrixSerial(const std::vector<FiniteStructure>& members, const EFConfig& cfg,
                                const std::vector<std::vector<char>>& skip,
                                std::size_t positionBudget) {
  const std::size_t k = members.size();
  WinnerMatrix w(k, std::vector<Player>(k, Player::II));
  for (std::size_t i = 0; i < k; ++i) {
    for (std::size_t j = 0; j < k; ++j) {
      if (skipped(skip, i, j)) continue;
      w[i][j] = efWinner(members[i], members[j], cfg, positionBudget).winner;
    }
  }
  return w;
}

WinnerMatrix winnerMatrixParallel(const std::vector<FiniteStructure>& members,
                                  const EFConfig& cfg,
                                  const std::vector<std::vector<char>>& skip,
                                  std::size_t positionBudget) {
  const std::size_t k = members.size();
  WinnerMatrix w(k, std::vector<Player>(k, Player::II));
  // vector<Player> rather than a bit-packed type, so distinct cells can be
  // written from different threads.
  std::exception_ptr failure;
  const long long pairs = static_cast<long long>(k * k);
#pragma omp parallel for schedule(dynamic, 1)
  for (long long idx = 0; idx < pairs; ++idx) {
    const std::size_t i = static_cast<std::size_t>(idx) / k;
    const std::size_t j = static_cast<std::size_t>(idx) % k;
    if (skipped(skip, i, j)) continue;
    try {
      w[i][j] = efWinner(members[i], members[j], cfg, positionBudget).winner;
    } catch (...) {
#pragma omp critical(scottlab_matrix_failure)
      if (!failure) failure = std::current_exception();
    }
  }
  if (failure) std::rethrow_exception(failure);
  return w;
}

}  // namespace scottlab
