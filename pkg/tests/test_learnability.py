"""
Tests pour le module d'apprenabilité: langages, textes, métriques, apprenants et expériences
"""

import math
import sys
from fractions import Fraction
from pathlib import Path

import pytest

# Ajouter le répertoire src au path
sys.path.insert(0, str(Path(__file__).parent.parent / "src"))

from src.core.learnability.adversary import FEED_FRESH, PATTERN_FEED, PATTERN_REPEAT, REPEAT_RANGE, \
    adversary_trace, classify_pattern, completion_text, mind_changes, run_adversary, witness_holds
from src.core.learnability.angluin import INCONCLUSIVE, LEARNABLE, NOT_LEARNABLE, REFUTED, UNKNOWN, \
    WITNESS, Family, check_family, cross_check, find_telltale, order_for_enumeration, reverify_witness
from src.core.learnability.base import INFINITE, DomainError, MetricDomainError, PreconditionError, \
    ValidationError, as_fraction, format_cardinality
from src.core.learnability.catalog import build_learner, build_metric, list_builtins, \
    random_finite_languages, render_builtins
from src.core.learnability.chains import CONVERGING, DEFAULT_LADDER, OBSTRUCTED, chain_from_decomposition, \
    chain_from_enumeration, chain_from_text, convergence_experiment, learning_consistency_check, \
    necessary_condition_check
from src.core.learnability.languages import Alphabet, FiniteLanguage, cardinality, enumerate_words, \
    equals, finite, intersection_cardinality, is_proper_subset, is_subset, language_from_description, \
    membership, regular, union
from src.core.learnability.learners import enumeration_learner, memorizing_learner, range_learner
from src.core.learnability.locking import NOT_FOUND, PASS, REASON_CONTINUATION, REASON_NOT_SUBSET, \
    REASON_PREFIX, LockingVerifier, continuation_universe_size, exact_lock_certified, search_locking, \
    verify_locking
from src.core.learnability.metrics import DistanceInterval, counting_metric, estimate_gap, exact_metric, \
    lower, symdiff_metric, upper, verify_metric_axioms, zero_one_scaled_metric
from src.core.learnability.random_source import MASK64, splitmix64, uniform_index, value_at
from src.core.learnability.simulate import check_exact_stabilization, check_limit_convergence, run
from src.core.learnability.texts import DataSet, canonical_text, locking_prefix_text, random_fair_text, \
    replay_text


class TestAlphabet:
    """Tests pour Alphabet et l'ordre shortlex"""

    def test_duplicate_symbols_rejected(self):
        """Un symbole dupliqué est refusé"""
        with pytest.raises(ValidationError):
            Alphabet('aa')

    def test_empty_alphabet_rejected(self):
        with pytest.raises(ValidationError):
            Alphabet('')

    def test_check_word(self, binary):
        """Mot vide et symboles étrangers sont hors domaine"""
        assert binary.check_word('abba') == 'abba'
        with pytest.raises(DomainError):
            binary.check_word('')
        with pytest.raises(DomainError):
            binary.check_word('abc')

    def test_check_word_keeps_no_state(self, binary):
        """La validation ne mémorise aucun mot"""
        for word in binary.iter_universe(8):
            binary.check_word(word)
        assert set(vars(binary)) == {'symbols', '_order'}

    def test_rank_and_word_at_rank(self, binary):
        """Les rangs shortlex commencent à 1"""
        assert [binary.rank(w) for w in ('a', 'b', 'aa', 'ab', 'ba', 'bb', 'aaa')] == [1, 2, 3, 4, 5, 6, 7]
        assert binary.word_at_rank(6) == 'bb'
        assert Alphabet('a').rank('aaaa') == 4

    def test_universe_order(self, binary):
        assert list(binary.iter_universe(2)) == ['a', 'b', 'aa', 'ab', 'ba', 'bb']


class TestLanguages:
    """Tests pour les opérations sur les langages"""

    def test_membership(self, unary, a_plus):
        assert membership(a_plus, 'aaaa')
        assert not membership(finite(unary, 'a', 'aa'), 'aaa')

    def test_membership_foreign_symbol(self, a_plus):
        with pytest.raises(DomainError):
            membership(a_plus, 'ab')

    def test_empty_word_pattern_rejected(self, unary):
        """Un motif acceptant le mot vide est invalide"""
        with pytest.raises(ValidationError):
            regular(unary, 'a*')

    def test_cardinality(self, unary, a_plus):
        assert cardinality(regular(unary, 'a|aa')) == 2
        assert cardinality(a_plus) == INFINITE
        assert cardinality(finite(unary, 'a', 'aa', 'aaa')) == 3
        assert format_cardinality(INFINITE) == 'inf'

    def test_enumerate_words(self, ab_plus, small_finite):
        assert enumerate_words(ab_plus, 5, 2) == ['a', 'b', 'aa', 'ab', 'ba']
        assert enumerate_words(ab_plus, 10, 1) == ['a', 'b']
        assert enumerate_words(small_finite, 10, 5) == ['a', 'ab']

    def test_enumerate_words_bounds(self, ab_plus):
        with pytest.raises(DomainError):
            enumerate_words(ab_plus, 0, 3)

    def test_equals_across_representations(self, unary):
        assert equals(regular(unary, 'a|aa'), finite(unary, 'aa', 'a'))
        assert equals(regular(unary, 'aa*'), regular(unary, 'a+'))
        assert not equals(regular(unary, 'a+'), finite(unary, 'a'))

    def test_equals_alphabet_mismatch(self, unary, binary):
        with pytest.raises(DomainError):
            equals(finite(unary, 'a'), finite(binary, 'a'))

    def test_subsets(self, unary, a_plus):
        assert is_proper_subset(finite(unary, 'a'), a_plus)
        assert is_subset(a_plus, a_plus)
        assert not is_proper_subset(a_plus, a_plus)
        assert not is_subset(a_plus, finite(unary, 'a'))

    def test_intersection_cardinality(self, binary):
        assert intersection_cardinality(regular(binary, 'a+'), finite(binary, 'a', 'b', 'aa')) == 2
        assert intersection_cardinality(regular(binary, 'a+'), regular(binary, '(a|b)+')) == INFINITE
        assert intersection_cardinality(regular(binary, 'a+'), regular(binary, 'b+')) == 0

    def test_union(self, unary):
        both = union(finite(unary, 'a'), finite(unary, 'aa'))
        assert isinstance(both, FiniteLanguage)
        assert both.words == frozenset({'a', 'aa'})
        assert equals(union(finite(unary, 'a'), regular(unary, 'aa+')), regular(unary, 'a+'))

    def test_language_from_description(self, binary):
        assert equals(language_from_description(binary, {'kind': 'finite', 'words': ['a']}), finite(binary, 'a'))
        assert language_from_description(binary, 'b+').contains('bbb')
        with pytest.raises(ValidationError):
            language_from_description(binary, {'kind': 'grammar'})


class TestRandomSource:
    """Tests pour le générateur SplitMix64"""

    def test_deterministic(self):
        assert value_at(42, 7) == value_at(42, 7)
        assert value_at(42, 7) != value_at(43, 7)

    def test_uniform_index_range(self):
        assert all(0 <= uniform_index(3, k, 5) < 5 for k in range(100))

    def test_uniform_index_rejects_top_values(self, mocker):
        """Une valeur au-delà du dernier multiple de bound est remélangée"""
        mocker.patch('src.core.learnability.random_source.value_at', return_value=MASK64)
        # 2^64 mod 3 = 1: MASK64 tombe dans la zone rejetée
        assert uniform_index(0, 0, 3) == splitmix64(MASK64) % 3

    def test_uniform_index_distribution(self):
        """Répartition équilibrée pour une borne qui ne divise pas 2^64"""
        counts = [0, 0, 0]
        for k in range(3000):
            counts[uniform_index(11, k, 3)] += 1
        assert all(850 <= c <= 1150 for c in counts)

    def test_uniform_index_large_bound(self):
        """Borne 2^63 + 1: près de la moitié des valeurs brutes sont rejetées"""
        bound = (1 << 63) + 1
        draws = [uniform_index(5, k, bound) for k in range(200)]
        assert all(0 <= d < bound for d in draws)
        assert any(value_at(5, k) >= bound for k in range(200))


class TestTexts:
    """Tests pour DataSet et les textes"""

    def test_dataset_rejects_empty(self, binary):
        with pytest.raises(ValidationError):
            DataSet((), binary)

    def test_dataset_concat_and_range(self, binary):
        s = DataSet.of(binary, ['a', 'b']) + DataSet.of(binary, ['a'])
        assert s.items == ('a', 'b', 'a')
        assert s.range().words == frozenset({'a', 'b'})
        assert s.label() == '(a,b,a)'

    def test_canonical_text(self, unary, a_plus):
        text = canonical_text(a_plus)
        assert [text.word(k) for k in range(1, 4)] == ['a', 'aa', 'aaa']
        cyclic = canonical_text(finite(unary, 'a', 'aa'))
        assert [cyclic.word(k) for k in range(1, 5)] == ['a', 'aa', 'a', 'aa']

    def test_text_index_starts_at_one(self, a_plus):
        with pytest.raises(DomainError):
            canonical_text(a_plus).word(0)

    def test_random_text_even_positions_are_canonical(self, a_plus):
        text = random_fair_text(a_plus, 5)
        assert text.word(1) == 'a'
        assert text.word(4) == 'aa'
        assert text.word(10) == 'aaaaa'

    def test_random_text_reproducible(self, ab_plus):
        first = random_fair_text(ab_plus, 9).prefix(50)
        second = random_fair_text(ab_plus, 9).prefix(50)
        assert first == second

    def test_random_text_fairness(self, ab_plus):
        """Le i-ème mot shortlex apparaît au plus tard à l'indice 2i"""
        text = random_fair_text(ab_plus, 3)
        for i in range(1, 20):
            assert ab_plus.nth_word(i) in text.prefix(text.fairness_bound(i)).items

    def test_locking_prefix_text(self, binary, ab_plus):
        prefix = DataSet.of(binary, ['bb', 'a'])
        text = locking_prefix_text(prefix, ab_plus)
        assert [text.word(k) for k in range(1, 5)] == ['bb', 'a', 'a', 'b']

    def test_prefix_outside_language(self, binary, small_finite):
        with pytest.raises(PreconditionError):
            replay_text(DataSet.of(binary, ['b']), small_finite)


class TestMetrics:
    """Tests pour les métriques"""

    def test_exact_metric(self, unary, a_plus):
        m = exact_metric()
        assert m.distance(a_plus, a_plus) == 0
        assert m.distance(finite(unary, 'a'), a_plus) == 1
        assert m.is_exact

    def test_scaled_exact_metric(self, unary):
        m = zero_one_scaled_metric('1/2')
        assert m.distance(finite(unary, 'a'), finite(unary, 'aa')) == Fraction(1, 2)
        with pytest.raises(DomainError):
            zero_one_scaled_metric(0)

    def test_counting_metric(self, unary, a_plus):
        m = counting_metric(a_plus)
        assert m.distance(finite(unary, 'a'), a_plus) == 1
        assert m.distance(finite(unary, 'a', 'aa'), a_plus) == Fraction(1, 2)
        assert m.distance(finite(unary, 'a'), finite(unary, 'aa')) == 2
        assert m.distance(a_plus, a_plus) == 0
        assert not m.is_exact

    def test_counting_metric_domain(self, unary, a_plus):
        """Un langage infini différent de L_inf est hors domaine"""
        m = counting_metric(a_plus)
        with pytest.raises(MetricDomainError):
            m.distance(regular(unary, 'aa+'), a_plus)
        with pytest.raises(DomainError):
            counting_metric(finite(unary, 'a'))

    def test_symdiff_finite(self, binary):
        m = symdiff_metric(2)
        assert m.distance(finite(binary, 'a'), finite(binary, 'b')) == Fraction(3, 4)
        assert m.distance(finite(binary, 'a'), finite(binary, 'a')) == 0

    def test_symdiff_interval(self, binary, ab_plus):
        d = symdiff_metric(2, truncation_rank=10).distance(finite(binary, 'a', 'b'), ab_plus)
        assert isinstance(d, DistanceInterval)
        assert lower(d) == sum(Fraction(1, 2 ** r) for r in range(3, 11))
        assert upper(d) - lower(d) == Fraction(1, 2 ** 10)

    def test_symdiff_infinite_exact(self, binary):
        """Différence symétrique finie entre deux langages infinis: valeur exacte"""
        d = symdiff_metric(2).distance(regular(binary, 'a+'), regular(binary, 'aa+'))
        assert d == Fraction(1, 2)

    def test_axioms(self, unary, a_plus):
        sample = [finite(unary, 'a'), finite(unary, 'a', 'aa'), finite(unary, 'aaa'), a_plus]
        for m in (exact_metric(), counting_metric(a_plus), symdiff_metric(2)):
            report = verify_metric_axioms(m, sample)
            assert report.passed, report.counterexamples
            assert report.pairs_checked == 16
            assert report.triples_checked == 64

    def test_symdiff_truncation_horizon(self, binary):
        """Sur {a,b}, rang(a^k) = 2^k - 1: au-delà du rang R la distance se réduit à [0, queue]"""
        limit = regular(binary, 'a+')
        chain = [finite(binary, *['a' * j for j in range(1, n + 1)]) for n in range(1, 10)]
        tail = Fraction(1, 2 ** 64)

        distances = [symdiff_metric(2, truncation_rank=64).distance(L, limit) for L in chain]
        # a^6 (rang 63) est le dernier mot distinguant sous le rang 64
        lows = [lower(d) for d in distances[:5]]
        assert all(lo > 0 for lo in lows)
        assert lows == sorted(lows, reverse=True) and len(set(lows)) == 5
        assert lows[0] == sum((Fraction(1, 2 ** (2 ** k - 1)) for k in range(2, 7)), Fraction(0))
        assert all(d == DistanceInterval(Fraction(0), tail) for d in distances[5:])

        # un rang plus grand prolonge la décroissance observable
        wider = [symdiff_metric(2, truncation_rank=256).distance(L, limit) for L in chain]
        assert lower(wider[6]) == Fraction(1, 2 ** 255)
        assert lower(wider[7]) == 0

    def test_axioms_detect_broken_metric(self, unary):
        from src.core.learnability.metrics import Metric
        broken = Metric('broken', lambda L, G: Fraction(0))
        report = verify_metric_axioms(broken, [finite(unary, 'a'), finite(unary, 'aa')])
        assert not report.passed
        assert {v.axiom for v in report.counterexamples} == {'identity'}

    def test_axioms_report_domain_errors(self, unary, a_plus):
        report = verify_metric_axioms(counting_metric(a_plus), [regular(unary, 'aa+'), finite(unary, 'a')])
        assert report.domain_errors

    def test_estimate_gap(self, unary, a_plus):
        sample = [finite(unary, 'a'), finite(unary, 'a', 'aa'), a_plus]
        assert estimate_gap(exact_metric(), sample) == 1
        assert estimate_gap(counting_metric(a_plus), sample) == Fraction(1, 2)

    def test_as_fraction(self):
        assert as_fraction(0.1) == Fraction(1, 10)
        assert as_fraction('1/4') == Fraction(1, 4)
        with pytest.raises(DomainError):
            as_fraction(float('nan'))
        with pytest.raises(DomainError):
            as_fraction(True)


class TestLearners:
    """Tests pour les apprenants"""

    def test_range_learner(self, binary):
        learner = range_learner()
        assert learner(DataSet.of(binary, ['a', 'b', 'a'])).words == frozenset({'a', 'b'})

    def test_stepper_matches_reinvocation(self, ab_plus):
        """Le chemin incrémental coïncide avec la réinvocation sur les préfixes"""
        text = random_fair_text(ab_plus, 2)
        family = [finite(ab_plus.alphabet, 'a', 'b'), ab_plus]
        for learner in (range_learner(), enumeration_learner(family), memorizing_learner(ab_plus, 2)):
            stepper = learner.stepper(ab_plus.alphabet)
            for k in range(1, 15):
                assert equals(stepper.push(text.word(k)), learner(text.prefix(k)))

    def test_enumeration_learner(self, unary, a_plus):
        family = [finite(unary, 'a'), finite(unary, 'a', 'aa'), a_plus]
        learner = enumeration_learner(family)
        assert equals(learner(DataSet.of(unary, ['a'])), family[0])
        assert equals(learner(DataSet.of(unary, ['aa', 'a'])), family[1])
        assert learner(DataSet.of(unary, ['aaa'])) is a_plus

    def test_enumeration_learner_fallback_to_range(self, binary):
        learner = enumeration_learner([finite(binary, 'a')])
        assert learner(DataSet.of(binary, ['b'])).words == frozenset({'b'})

    def test_enumeration_learner_empty_family(self):
        with pytest.raises(ValidationError):
            enumeration_learner([])

    def test_memorizing_learner(self, unary, a_plus):
        learner = memorizing_learner(a_plus, 2)
        assert learner(DataSet.of(unary, ['a', 'aa'])) is a_plus
        assert learner(DataSet.of(unary, ['a', 'aa', 'a'])).words == frozenset({'a', 'aa'})

    def test_memorizing_learner_requires_infinite(self, unary):
        with pytest.raises(DomainError):
            memorizing_learner(finite(unary, 'a'), 2)
        with pytest.raises(DomainError):
            memorizing_learner(regular(unary, 'a+'), 0)


class TestSimulation:
    """Tests pour la simulation et les vérifications de convergence"""

    def test_range_counting_trace(self, a_plus):
        trace = run(range_learner(), canonical_text(a_plus), a_plus, counting_metric(a_plus), 100)
        assert len(trace) == 100
        assert trace.distances == [Fraction(1, k) for k in range(1, 101)]
        assert trace.steps[-1].distance == Fraction(1, 100)

    def test_limit_convergence(self, a_plus):
        trace = run(range_learner(), canonical_text(a_plus), a_plus, counting_metric(a_plus), 100)
        assert check_limit_convergence(trace, Fraction(1, 2)) == 3
        assert check_limit_convergence(trace, 0.1) == 11
        assert check_limit_convergence(trace, Fraction(1, 200)) is None
        assert check_exact_stabilization(trace) is None

    def test_limit_convergence_rejects_zero(self, a_plus):
        trace = run(range_learner(), canonical_text(a_plus), a_plus, exact_metric(), 5)
        with pytest.raises(DomainError):
            check_limit_convergence(trace, 0)

    def test_exact_stabilization_on_finite_target(self, unary):
        target = finite(unary, 'a', 'aa')
        trace = run(range_learner(), canonical_text(target), target, exact_metric(), 10)
        assert check_exact_stabilization(trace) == 2
        assert check_limit_convergence(trace, Fraction(1, 2)) == 2
        assert mind_changes(trace) == 1

    def test_range_learner_infinite_target(self, ab_plus):
        """entered_at = ceil(1/ε) + 1 sur le texte canonique"""
        trace = run(range_learner(), canonical_text(ab_plus), ab_plus, counting_metric(ab_plus), 2000)
        for eps in (Fraction(1, 2), Fraction(1, 8), Fraction(1, 32)):
            assert check_limit_convergence(trace, eps) == math.ceil(1 / eps) + 1

    def test_range_learner_finite_targets(self, binary, ab_plus):
        metric = counting_metric(ab_plus)
        targets = random_finite_languages(binary, 10, seed=5)
        for target in targets:
            for text in [canonical_text(target)] + [random_fair_text(target, s) for s in (1, 2, 3)]:
                trace = run(range_learner(), text, target, metric, 200)
                for eps in (Fraction(1, 2), Fraction(1, 8), Fraction(1, 32)):
                    assert check_limit_convergence(trace, eps) is not None

    def test_metric_domain_steps_are_flagged(self, unary, a_plus):
        learner = enumeration_learner([regular(unary, 'aa+'), a_plus])
        trace = run(learner, canonical_text(finite(unary, 'aa')), finite(unary, 'aa'), counting_metric(a_plus), 3)
        assert trace.flagged == [1, 2, 3]
        assert trace.steps[0].distance is None

    def test_horizon_must_be_positive(self, a_plus):
        with pytest.raises(DomainError):
            run(range_learner(), canonical_text(a_plus), a_plus, exact_metric(), 0)


class TestLocking:
    """Tests pour la vérification et la recherche d'ensembles verrouillants"""

    def test_verify_pass(self, binary, small_finite):
        report = verify_locking(DataSet.of(binary, ['a', 'ab']), small_finite, range_learner(),
                                exact_metric(), Fraction(1, 2), max_workers=2)
        assert report.verdict == PASS
        assert report.counterexample is None
        assert report.universe_size == continuation_universe_size(2, 3) == 2 + 4 + 8
        assert report.continuations_checked == report.universe_size
        assert exact_lock_certified(report, exact_metric())

    def test_verify_prefix_not_close(self, binary, small_finite):
        report = verify_locking(DataSet.of(binary, ['a']), small_finite, range_learner(),
                                exact_metric(), Fraction(1, 2), max_workers=2)
        assert report.verdict == 'FAIL'
        assert report.reason == REASON_PREFIX

    def test_verify_not_subset(self, binary, small_finite):
        report = verify_locking(DataSet.of(binary, ['b']), small_finite, range_learner(),
                                exact_metric(), Fraction(1, 2))
        assert report.reason == REASON_NOT_SUBSET

    def test_verify_continuation_counterexample(self, unary, a_plus):
        """L'apprenant mémorisant quitte la boule après une continuation fraîche"""
        learner = memorizing_learner(a_plus, 2)
        target = a_plus
        report = verify_locking(DataSet.of(unary, ['a', 'aa', 'a']), target, enumeration_learner([target]),
                                exact_metric(), Fraction(1, 2), max_workers=2)
        assert report.passed
        report = verify_locking(DataSet.of(unary, ['a', 'aa']), target, learner,
                                exact_metric(), Fraction(1, 2), max_workers=2)
        assert report.reason == REASON_CONTINUATION
        assert report.counterexample.items == ('a',)

    def test_search_found_with_counting_metric(self, ab_plus):
        result = search_locking(ab_plus, range_learner(), counting_metric(ab_plus), Fraction(1, 4), max_workers=2)
        assert result.found is not None
        assert result.found.length == 5
        assert result.report.passed

    def test_search_not_found_with_exact_metric(self, a_plus):
        result = search_locking(a_plus, range_learner(), exact_metric(), Fraction(1, 4),
                                max_prefix_len=6, max_workers=2)
        assert result.found is None
        assert result.message == NOT_FOUND
        assert result.candidates_tried == 6

    def test_search_logs_memory(self, ab_plus, mocker):
        """Fin de recherche journalisée avec la mémoire résidente quand psutil est présent"""
        logger = mocker.Mock()
        verifier = LockingVerifier(range_learner(), counting_metric(ab_plus), 2, logger)
        verifier.psutil_available = True
        mocker.patch.object(verifier, '_memory_mb', return_value=12.5)
        verifier.search(ab_plus, Fraction(1, 4))
        assert any('mémoire 12.5 MB' in call.args[0] for call in logger.info.call_args_list)

    def test_epsilon_must_be_positive(self, binary, small_finite):
        with pytest.raises(DomainError):
            verify_locking(DataSet.of(binary, ['a']), small_finite, range_learner(), exact_metric(), 0)


class TestChains:
    """Tests pour les chaînes croissantes et l'expérience de convergence"""

    def test_counting_chain_converges(self, a_plus):
        experiment = convergence_experiment(chain_from_enumeration(a_plus), counting_metric(a_plus), 1000)
        assert [row.distance for row in experiment.rows] == [Fraction(1, n) for n in range(1, 1001)]
        assert experiment.verdict == CONVERGING
        assert experiment.unbeaten == []

    def test_exact_chain_obstructed(self, a_plus):
        experiment = convergence_experiment(chain_from_enumeration(a_plus), exact_metric(), 1000)
        assert all(row.distance == 1 for row in experiment.rows)
        assert experiment.verdict == OBSTRUCTED
        assert experiment.unbeaten == list(DEFAULT_LADDER)
        assert experiment.verdict_line().startswith('VERDICT OBSTRUCTED n_max=1000')

    def test_decomposition_chain(self, binary, ab_plus):
        parts = [regular(binary, 'a|b'), regular(binary, '(a|b)(a|b)')]
        chain = chain_from_decomposition(parts, ab_plus, coverage_length=2)
        assert chain.language(1).cardinality() == 2
        assert chain.language(5).cardinality() == 6
        chain.validate(3)

    def test_decomposition_part_outside_limit(self, binary):
        with pytest.raises(PreconditionError):
            chain_from_decomposition([regular(binary, 'b+')], regular(binary, 'a+'))

    def test_decomposition_coverage_gap(self, binary, ab_plus):
        with pytest.raises(ValidationError):
            chain_from_decomposition([regular(binary, 'a+')], ab_plus, coverage_length=1)

    def test_chain_from_random_text_validates(self, ab_plus):
        chain = chain_from_text(random_fair_text(ab_plus, 4), ab_plus)
        chain.validate(30)
        assert is_subset(chain.language(10), chain.language(11))

    def test_necessary_condition(self, a_plus):
        report = necessary_condition_check([chain_from_enumeration(a_plus)], exact_metric(), 20)
        assert not report.holds
        assert len(report.obstructed) == 1

    def test_learning_consistency_check(self, a_plus):
        chain = chain_from_enumeration(a_plus)
        report = learning_consistency_check(chain, counting_metric(a_plus), [range_learner()],
                                            horizon=50, epsilon=Fraction(1, 4), sample_indices=[1, 3], n_max=100)
        assert report.certified
        assert report.consistent


class TestAngluin:
    """Tests pour la condition des tell-tales"""

    def test_finite_family_learnable(self, unary):
        family = Family.from_members([finite(unary, 'a'), finite(unary, 'a', 'aa')])
        report = check_family(family, max_workers=2)
        assert report.verdict == LEARNABLE
        assert all(v.reverified for v in report.verdicts)

    def test_witness_for_infinite_member(self, unary, a_plus):
        family = Family.from_members([finite(unary, 'a'), a_plus])
        verdict = find_telltale(a_plus, family, index=2)
        assert verdict.status == WITNESS
        assert verdict.witness.words == frozenset({'aa'})
        assert reverify_witness(a_plus, verdict.witness, family)
        assert verdict.line() == 'MEMBER 2 WITNESS a+ D={aa}'

    def test_bounded_finite_plus_infinite_not_learnable(self, unary, a_plus):
        family = Family.with_schema(unary, 4, 6, [a_plus])
        assert family.schema.size() == 56
        report = check_family(family, max_workers=2)
        assert report.verdict == NOT_LEARNABLE
        assert report.verdicts[-1].status == REFUTED
        assert report.lines()[-1] == 'FAMILY NOT_LEARNABLE'
        assert all(v.status == WITNESS for v in report.verdicts[:-1])

    def test_inconclusive_without_schema(self, unary):
        """Une chaîne infinie de membres bloque tous les candidats bornés"""
        members = [regular(unary, 'a+')] + [finite(unary, *['a' * j for j in range(1, n + 1)]) for n in range(1, 8)]
        verdict = find_telltale(members[0], Family.from_members(members), max_subset_size=2, max_word_len=3)
        assert verdict.status == INCONCLUSIVE
        assert verdict.blocking

    def test_unconfirmed_witness_downgrades_verdict(self, unary, mocker):
        """Un tell-tale non confirmé rend la famille UNKNOWN et marque la ligne du membre"""
        mocker.patch('src.core.learnability.angluin.reverify_witness', return_value=False)
        family = Family.from_members([finite(unary, 'a'), finite(unary, 'a', 'aa')])
        report = check_family(family, max_workers=2)
        assert report.verdict == UNKNOWN
        assert report.lines()[0] == 'MEMBER 1 WITNESS {a} D={a} UNCONFIRMED'
        assert report.lines()[-1] == 'FAMILY UNKNOWN'

    def test_member_outside_family(self, unary, a_plus):
        with pytest.raises(PreconditionError):
            find_telltale(a_plus, Family.from_members([finite(unary, 'a')]))

    def test_order_for_enumeration(self, unary, a_plus):
        ordered = order_for_enumeration([a_plus, finite(unary, 'a', 'aa'), finite(unary, 'a')])
        assert [L.label() for L in ordered] == ['{a}', '{a,aa}', 'a+']

    def test_cross_check(self, unary, a_plus):
        family = Family.from_members([finite(unary, 'a'), a_plus])
        report = check_family(family, max_workers=2)
        check = cross_check(family, report)
        assert check.passed
        assert check.horizon == 4 * (1 + 1)


class TestAdversary:
    """Tests pour l'adversaire de Gold"""

    def test_range_learner_feed_fresh(self, a_plus):
        result = run_adversary(range_learner(), a_plus, 6)
        assert result.phase_log == [FEED_FRESH] * 6
        assert mind_changes(adversary_trace(result)) == 5
        assert classify_pattern(result) == PATTERN_FEED

    def test_enumeration_learner_repeat_range(self, unary, a_plus):
        learner = enumeration_learner([finite(unary, 'a'), finite(unary, 'a', 'aa'), a_plus])
        result = run_adversary(learner, a_plus, 40)
        assert result.phase_log[:3] == [FEED_FRESH] * 3
        assert set(result.phase_log[3:]) == {REPEAT_RANGE}
        assert classify_pattern(result) == PATTERN_REPEAT
        assert witness_holds(result)

    @pytest.mark.parametrize("make_learner", [
        lambda L: range_learner(),
        lambda L: enumeration_learner([FiniteLanguage.of(L.alphabet, ['a']), L]),
        lambda L: memorizing_learner(L, 3),
    ])
    def test_witness_at_horizon_1000(self, a_plus, make_learner):
        result = run_adversary(make_learner(a_plus), a_plus, 1000)
        assert witness_holds(result)
        assert is_subset(result.produced.range(), a_plus)

    def test_completion_text_extends_produced(self, a_plus):
        result = run_adversary(memorizing_learner(a_plus, 2), a_plus, 12)
        text = completion_text(result)
        assert text.prefix(12) == result.produced

    def test_adversary_requires_infinite_language(self, unary):
        with pytest.raises(DomainError):
            run_adversary(range_learner(), finite(unary, 'a'), 5)


class TestCatalog:
    """Tests pour le catalogue des composants"""

    def test_builtins_content(self):
        catalog = list_builtins()
        assert 'counting' in catalog['metrics']
        assert 'range' in catalog['learners']
        assert 'seeded-random' in catalog['texts']

    def test_render_is_stable(self):
        assert render_builtins() == render_builtins()

    def test_build_metric_unknown_kind(self, binary):
        with pytest.raises(ValidationError):
            build_metric(binary, {'kind': 'hamming'})

    def test_build_learner_schema_family_is_ordered(self, unary):
        learner = build_learner(unary, {'kind': 'enumeration',
                                        'family': {'schema': {'max_words': 1, 'max_len': 2}, 'extras': ['a+']}})
        assert learner(DataSet.of(unary, ['aaa'])).label() == 'a+'
        assert learner(DataSet.of(unary, ['aa'])).label() == '{aa}'

    def test_random_finite_languages(self, binary):
        first = random_finite_languages(binary, 25, seed=1)
        second = random_finite_languages(binary, 25, seed=1)
        assert [L.words for L in first] == [L.words for L in second]
        assert all(1 <= L.cardinality() <= 4 for L in first)


BINARY = Alphabet('ab')
FINITE_TARGETS = random_finite_languages(BINARY, 10, seed=5)
ALL_TARGETS = FINITE_TARGETS + [regular(BINARY, '(a|b)+')]
TEXT_KINDS = [('canonical', None), ('seeded-random', 1), ('seeded-random', 2), ('seeded-random', 3)]
CONVERGENCE_EPSILONS = [Fraction(1, 2), Fraction(1, 4), Fraction(1, 8), Fraction(1, 32)]


class TestLearnableTargets:
    """L'apprenant par l'image sous la métrique de comptage de (a|b)+: cibles finies et cible infinie"""

    @pytest.mark.parametrize("kind,seed", TEXT_KINDS)
    @pytest.mark.parametrize("target_index", range(len(ALL_TARGETS)))
    def test_limit_convergence_horizon_2000(self, target_index, kind, seed):
        target = ALL_TARGETS[target_index]
        limit = ALL_TARGETS[-1]
        text = canonical_text(target) if kind == 'canonical' else random_fair_text(target, seed)
        trace = run(range_learner(), text, target, counting_metric(limit), 2000)
        for eps in CONVERGENCE_EPSILONS:
            entered_at = check_limit_convergence(trace, eps)
            assert entered_at is not None, f"{target.label()} {kind}/{seed} ε={eps}"
            if target.is_finite:
                # la distance est nulle dès que le texte a couvert la cible
                assert entered_at <= text.fairness_bound(len(target.words))
        if target.is_finite:
            assert check_exact_stabilization(trace) is not None

    @pytest.mark.parametrize("target_index", range(len(ALL_TARGETS)))
    def test_locking_sequence_exists(self, target_index):
        """Bornes par défaut, ε = 1/4: un préfixe canonique verrouillant est trouvé"""
        target = ALL_TARGETS[target_index]
        result = search_locking(target, range_learner(), counting_metric(ALL_TARGETS[-1]), Fraction(1, 4),
                                max_workers=2)
        assert result.found is not None, target.label()
        assert result.report.passed
        if target.is_finite:
            # un sous-ensemble strict d'au plus 3 mots reste à distance ≥ 1/3 + 1/4
            assert result.found.length == len(target.words)
            assert equals(result.found.range(), target)
        else:
            assert result.found.length == 5
