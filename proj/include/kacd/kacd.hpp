#ifndef KACD_KACD_HPP_
#define KACD_KACD_HPP_

#include "kacd/automaton.hpp"
#include "kacd/decide.hpp"
#include "kacd/errors.hpp"
#include "kacd/hierarchy.hpp"
#include "kacd/semantics.hpp"
#include "kacd/term.hpp"
#include "kacd/word_theory.hpp"

#endif  // KACD_KACD_HPP_
