# coding=utf-8
# Licensed under the Apache License, Version 2.0 (the "License");
# you may not use this file except in compliance with the License.
# You may obtain a copy of the License at
#
#     http://www.apache.org/licenses/LICENSE-2.0
#
# Unless required by applicable law or agreed to in writing, software
# distributed under the License is distributed on an "AS IS" BASIS,
# WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
# See the License for the specific language governing permissions and
# limitations under the License.

"""Regularized logistic regression over client-held data."""

import logging

import numpy as np
from sklearn.datasets import make_classification

from compressed_opt.enums import ProblemKind

from .problem import Problem, ProblemError

logger = logging.getLogger(__name__)

DEFAULT_REG = 1e-6


def sigmoid(z):
    return 0.5 * (1.0 + np.tanh(0.5 * z))


def logistic_loss(a, b, x):
    """-b <a, x> + log(1 + exp(<a, x>)) for one sample."""
    z = float(np.dot(a, x))
    return float(np.logaddexp(0.0, z) - b * z)


def logistic_loss_gradient(a, b, x):
    z = float(np.dot(a, x))
    return np.asarray(a, dtype=np.float64) * (sigmoid(z) - b)


class LogisticProblem(Problem):
    """f_i(x) = (1/m_i) sum_j loss((a_j, b_j), x) + (reg/2) ||x||^2."""

    kind = ProblemKind.logistic

    def __init__(self, features, labels, reg=DEFAULT_REG):
        if len(features) != len(labels):
            raise ProblemError('got {} feature blocks and {} label blocks'
                               .format(len(features), len(labels)))
        if len(features) == 0:
            raise ProblemError('need at least one client')
        features = [np.asarray(a, dtype=np.float64) for a in features]
        labels = [np.asarray(b, dtype=np.float64) for b in labels]
        dimension = features[0].shape[1]
        for i, (a, b) in enumerate(zip(features, labels)):
            if a.ndim != 2 or a.shape[1] != dimension or a.shape[0] == 0:
                raise ProblemError('client {} has features of shape {}'.format(
                    i, a.shape))
            if b.shape != (a.shape[0],):
                raise ProblemError('client {} has {} labels for {} rows'.format(
                    i, b.shape, a.shape[0]))
            if not np.all((b == 0.0) | (b == 1.0)):
                raise ProblemError('labels must be 0 or 1')
        if reg < 0.0:
            raise ProblemError('reg must be nonnegative, got {}'.format(reg))
        super().__init__(len(features), dimension)
        self.features = features
        self.labels = labels
        self.reg = float(reg)

    def client_value(self, client, x):
        self._check_client(client)
        z = self.features[client] @ x
        loss = np.mean(np.logaddexp(0.0, z) - self.labels[client] * z)
        return float(loss) + 0.5 * self.reg * float(x @ x)

    def client_gradient(self, client, x):
        self._check_client(client)
        a = self.features[client]
        residual = sigmoid(a @ x) - self.labels[client]
        return a.T @ residual / a.shape[0] + self.reg * x

    def pooled_value(self, x):
        """f evaluated directly on the concatenated data set."""
        a = np.concatenate(self.features)
        b = np.concatenate(self.labels)
        z = a @ x
        return (float(np.mean(np.logaddexp(0.0, z) - b * z))
                + 0.5 * self.reg * float(x @ x))

    def pooled_gradient(self, x):
        a = np.concatenate(self.features)
        b = np.concatenate(self.labels)
        return a.T @ (sigmoid(a @ x) - b) / a.shape[0] + self.reg * x

    def client_smoothness(self):
        return np.array([_logistic_smoothness(a, self.reg)
                         for a in self.features])

    def smoothness(self):
        return _logistic_smoothness(np.concatenate(self.features), self.reg)

    def rows(self):
        """(client, label, features...) tuples for export."""
        for i, (a, b) in enumerate(zip(self.features, self.labels)):
            for row, label in zip(a, b):
                yield (i, int(label)) + tuple(float(v) for v in row)


def _logistic_smoothness(a, reg):
    # sigmoid' <= 1/4, so L <= lambda_max(A^T A) / (4 m) + reg
    top = float(np.linalg.norm(a, 2)) ** 2
    return top / (4.0 * a.shape[0]) + reg


def generate_synthetic_logistic(n_clients, d, samples_per_client,
                                heterogeneity=0.0, seed=0, reg=DEFAULT_REG,
                                flip_y=0.1, class_sep=1.0, feature_decay=1.0):
    """Non-separable binary classification data split over n_clients.

    heterogeneity = 0 spreads samples uniformly at random over clients;
    heterogeneity = 1 sorts them by label before splitting, so clients see
    mostly one class. Intermediate values blend the two orders.
    """
    for name, value in (('n_clients', n_clients), ('d', d),
                        ('samples_per_client', samples_per_client)):
        if int(value) < 1:
            raise ProblemError('{} must be positive, got {}'.format(
                name, value))
    if not 0.0 <= heterogeneity <= 1.0:
        raise ProblemError('heterogeneity must lie in [0, 1], got {}'.format(
            heterogeneity))
    if not 0.0 < feature_decay <= 1.0:
        raise ProblemError('feature_decay must lie in (0, 1], got {}'.format(
            feature_decay))

    n_samples = int(n_clients) * int(samples_per_client)
    features, labels = make_classification(
        n_samples=n_samples, n_features=int(d), n_informative=int(d),
        n_redundant=0, n_repeated=0, n_classes=2, n_clusters_per_class=1,
        flip_y=flip_y, class_sep=class_sep, random_state=int(seed))
    features = features * feature_decay ** np.arange(int(d))

    rng = np.random.default_rng(int(seed))
    key = heterogeneity * labels + rng.random(n_samples)
    order = np.argsort(key, kind='stable')
    features = features[order]
    labels = labels[order].astype(np.float64)

    logger.debug('generated logistic data: n=%d d=%d m=%d heterogeneity=%s',
                 n_clients, d, samples_per_client, heterogeneity)
    return LogisticProblem(np.split(features, int(n_clients)),
                           np.split(labels, int(n_clients)), reg=reg)
