#pragma once

#include <apcrowd/config.hpp>
#include <apcrowd/dataset.hpp>
#include <apcrowd/features.hpp>
#include <apcrowd/labeling.hpp>
#include <apcrowd/learn/ensemble.hpp>
#include <apcrowd/learn/evaluate.hpp>
#include <apcrowd/learn/knn.hpp>
#include <apcrowd/learn/logistic.hpp>
#include <apcrowd/learn/model_io.hpp>
#include <apcrowd/learn/tree.hpp>
#include <apcrowd/logmodel.hpp>
#include <apcrowd/pca.hpp>
#include <apcrowd/pipeline.hpp>
#include <apcrowd/simulator.hpp>
