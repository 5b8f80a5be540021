#!/usr/bin/env python3
"""
Simple Demo - a guided walk through the lab's main capabilities
"""

import logging
from datetime import datetime
from fractions import Fraction

from errors import PosetLabError
from lab_config import get_config


def demo_parameters():
    """Poset parameters and the span search behind them"""
    print("1. Poset Parameters Demo")
    print("-" * 30)

    from poset_lab import PosetLab

    lab = PosetLab()
    for name in ("chain:3", "vee:2", "diamond:2", "K:1,1,2"):
        params = lab.params(name, with_d=False)
        print(f"   + {name}: e={params['e']} e*={params['e_star']} x={params['x']} x*={params['x_star']}")
    params = lab.params("diamond:4", with_d=False)
    print(f"   + diamond:4: m_s={params['m_s']} m*_s={params['m_star_s']}")
    return True


def demo_extremal():
    """Exact extremal numbers and supersaturation minima"""
    print("\n2. Extremal Numbers Demo")
    print("-" * 30)

    from poset_lab import PosetLab

    lab = PosetLab()
    print(f"   + La(6, chain:2) = {lab.la(6, 'chain:2')['size']}")
    print(f"   + La(4, chain:3) = {lab.la(4, 'chain:3')['size']}")
    table = lab.min_copies(3, "chain:2")
    print(f"   + fewest 2-chains in 5 subsets of [3]: {int(table.loc[5, 'min_copies'])}")
    return True


def demo_chains():
    """Min-max chain partition statistics"""
    print("\n3. Chain Statistics Demo")
    print("-" * 30)

    from poset_lab import PosetLab

    stats = PosetLab().chain_stats("middle:5:2")
    print(f"   + {len(stats['pairs'])} interval pairs, Lubell value {stats['lubell']}")
    print(f"   + chains missing the family: {stats['empty_mass']}")
    return True


def demo_containers():
    """The induced vee container algorithm"""
    print("\n4. Container Demo")
    print("-" * 30)

    from poset_lab import PosetLab

    result = PosetLab().container("levels:6:3", 1, 1, Fraction(1, 8))
    print(f"   + |H1|={len(result['H1']['codes'])} |H2|={len(result['H2']['codes'])} "
          f"|f(H1)|={len(result['f_H1']['codes'])} |g|={len(result['g_H1H2']['codes'])}")
    print(f"   + {len(result['trace'])} rounds, phase boundary at {result['phase_boundary']}")
    return True


def demo_random():
    """P(n,p) experiments"""
    print("\n5. Random Model Demo")
    print("-" * 30)

    from poset_lab import PosetLab

    lab = PosetLab()
    table = lab.random(10, Fraction(1, 30), "chain:2", seeds=[1, 2, 3])
    print(f"   + mean removal construction size: {table['removal_size'].mean():.1f}")
    report = lab.create_report("Random model, chain:2", table)
    result = lab.save_report(report, "demo_random_report")
    print(f"   + {result}")
    return True


def main():
    """Main demo function"""
    logging.basicConfig(level=logging.WARNING)
    config = get_config()

    print("posetlab - Simple Demo")
    print("=" * 50)
    print(f"Project: {config['project']['name']}")
    print(f"Version: {config['project']['version']}")
    print(f"Date: {datetime.now().strftime('%Y-%m-%d %H:%M:%S')}")
    print("=" * 50)

    demos = [demo_parameters, demo_extremal, demo_chains, demo_containers, demo_random]
    success_count = 0
    for demo in demos:
        try:
            if demo():
                success_count += 1
        except PosetLabError as e:
            print(f"   - Demo failed: {e}")

    print("\n" + "=" * 50)
    print("Demo Summary")
    print("=" * 50)
    print(f"Completed: {success_count}/{len(demos)} demos")
    if success_count == len(demos):
        print("+ All demos completed successfully!")
        print("\nGenerated files:")
        print("- demo_random_report.md - random model table")
        print("\nNext steps:")
        print("1. Run 'python posetlab_cli.py --help' for the batch interface")
        print("2. Run 'pytest' (add '-m slow' for the exhaustive checks)")
    print(f"\nDemo completed at {datetime.now().strftime('%H:%M:%S')}")


if __name__ == "__main__":
    main()
