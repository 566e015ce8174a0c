#pragma once

#include "qred/extended_real.hpp"
#include "qred/operator.hpp"
#include "qred/entropy.hpp"
#include "qred/channel.hpp"
#include "qred/disturbance.hpp"
#include "qred/recovery.hpp"
#include "qred/random.hpp"
#include "qred/report.hpp"
#include "qred/probes.hpp"
#include "qred/io.hpp"
#include "qred/suite.hpp"
#include "qred/commands.hpp"
