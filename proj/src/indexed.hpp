#pragma once

#include <vector>

#include "treeshift/core.hpp"

namespace treeshift::detail {

/// Pattern flattened in preorder. Children always come after their parent,
/// so a reverse sweep is bottom-up.
struct IndexedPattern
{
	static constexpr int absent = -1;

	std::vector<Word> words;
	std::vector<Letter> labels;
	std::vector<std::vector<int>> children;

	explicit IndexedPattern(const Pattern& p)
	{
		std::map<Word, int> index;
		for (const auto& [w, a] : p.labels()) {
			index.emplace(w, static_cast<int>(words.size()));
			words.push_back(w);
			labels.push_back(a);
		}
		children.assign(words.size(), std::vector<int>(p.arity(), absent));
		for (std::size_t i = 1; i < words.size(); ++i) {
			children[static_cast<std::size_t>(index.at(words[i].parent()))][words[i].back()] =
			    static_cast<int>(i);
		}
	}

	std::size_t size() const { return words.size(); }

	bool is_leaf(std::size_t i) const
	{
		for (int c : children[i]) {
			if (c != absent) {
				return false;
			}
		}
		return true;
	}
};

} // namespace treeshift::detail
