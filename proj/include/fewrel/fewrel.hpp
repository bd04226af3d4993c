#pragma once

#include <fewrel/abelian.hpp>
#include <fewrel/embed.hpp>
#include <fewrel/errors.hpp>
#include <fewrel/experiment.hpp>
#include <fewrel/fox.hpp>
#include <fewrel/mincond.hpp>
#include <fewrel/novikov.hpp>
#include <fewrel/presentation.hpp>
#include <fewrel/smallcanc.hpp>
#include <fewrel/words.hpp>
