import argparse

import matplotlib.pyplot as plt
import numpy as np
import pandas as pd

from wcgkit.core import exceedance_rate, exceedance_slope


def plot_quantiles(frames, args):
    if args.backend is not None:
        plt.switch_backend(args.backend)
    # if legend is None, use {filename}_{metric} as legend
    legend = args.legend
    if legend is None:
        legend = [
            '{}_{}'.format(csv, metric) for csv in args.csv_files
            for metric in args.keys
        ]
    assert len(legend) == len(args.csv_files) * len(args.keys)
    num_metrics = len(args.keys)
    for i, frame in enumerate(frames):
        for j, metric in enumerate(args.keys):
            rows = frame[frame['metric'] == metric]
            if rows.empty:
                raise KeyError('{} does not contain metric {}'.format(
                    args.csv_files[i], metric))
            print('plot quantiles of {}, metric is {}'.format(
                args.csv_files[i], metric))
            grouped = rows.groupby('h')['value']
            hs = np.array(sorted(grouped.groups.keys()))
            median = grouped.median().loc[hs].to_numpy()
            low = grouped.quantile(0.1).loc[hs].to_numpy()
            high = grouped.quantile(0.9).loc[hs].to_numpy()
            label = legend[i * num_metrics + j]
            plt.plot(hs, median, label=label, marker='o')
            plt.fill_between(hs, low, high, alpha=0.2)
    plt.xscale('log')
    plt.xlabel('h')
    plt.legend()
    if args.title is not None:
        plt.title(args.title)
    _finish(args)


def exceedance(frames, args):
    for i, frame in enumerate(frames):
        print('{}Exceedance of {}{}'.format('-' * 5, args.csv_files[i],
                                            '-' * 5))
        rows = frame[frame['metric'] == args.key]
        hs, rates = [], []
        for h, group in rows.groupby('h'):
            hs.append(h)
            rates.append(exceedance_rate(group['value'], args.eps))
            print('h={:>6}: P(deviation > {}) = {:.4f} over {} seeds'.format(
                h, args.eps, rates[-1], len(group)))
        floor = 0.5 / rows.groupby('h').size().max()
        print('slope of log exceedance in h: {:.4g}'.format(
            exceedance_slope(hs, rates, floor=floor)))
        if args.plot:
            plt.semilogy(
                hs, np.maximum(rates, floor), marker='o',
                label=args.csv_files[i])
    if args.plot:
        plt.xlabel('h')
        plt.ylabel('exceedance rate')
        plt.legend()
        _finish(args)


def _finish(args):
    if args.out is None:
        plt.show()
    else:
        print('save figure to: {}'.format(args.out))
        plt.savefig(args.out)
        plt.cla()


def add_common_args(parser):
    parser.add_argument(
        'csv_files', type=str, nargs='+', help='metric CSV of a sweep')
    parser.add_argument(
        '--backend', type=str, default=None, help='backend of plt')
    parser.add_argument('--out', type=str, default=None)


def add_plot_parser(subparsers):
    parser_plt = subparsers.add_parser(
        'plot_quantiles', help='median and 10-90% band of metrics over h')
    add_common_args(parser_plt)
    parser_plt.add_argument(
        '--keys',
        type=str,
        nargs='+',
        default=['deviation_inf'],
        help='the metrics to plot')
    parser_plt.add_argument('--title', type=str, help='title of figure')
    parser_plt.add_argument(
        '--legend',
        type=str,
        nargs='+',
        default=None,
        help='legend of each plot')


def add_exceedance_parser(subparsers):
    parser_exc = subparsers.add_parser(
        'exceedance', help='exceedance rates of a deviation metric per h')
    add_common_args(parser_exc)
    parser_exc.add_argument('--key', type=str, default='deviation_inf')
    parser_exc.add_argument('--eps', type=float, default=0.05)
    parser_exc.add_argument(
        '--plot', action='store_true', help='also plot the rates')


def parse_args():
    parser = argparse.ArgumentParser(description='Analyze sweep metrics')
    subparsers = parser.add_subparsers(dest='task', help='task parser')
    add_plot_parser(subparsers)
    add_exceedance_parser(subparsers)
    return parser.parse_args()


TASKS = dict(plot_quantiles=plot_quantiles, exceedance=exceedance)


def main():
    args = parse_args()
    for csv_file in args.csv_files:
        assert csv_file.endswith('.csv')
    frames = [pd.read_csv(csv_file) for csv_file in args.csv_files]
    TASKS[args.task](frames, args)


if __name__ == '__main__':
    main()
