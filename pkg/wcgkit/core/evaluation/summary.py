from terminaltables import AsciiTable


def _emit(table, logger=None):
    if logger is None:
        print(table.table)
    else:
        logger.info('\n' + table.table)


def print_validation_report(report, logger=None):
    """Print violations of a :obj:`ValidationReport`, or a single OK row."""
    table_data = report.table_data()
    if len(table_data) == 1:
        table_data.append(['ok', 'instance is valid'])
    _emit(AsciiTable(table_data), logger)


def print_index_summary(tables, logger=None):
    """Print the downshift order and MP indices of every class."""
    header = ['class', 'm', 'state', 'label', 'index']
    table_data = [header]
    for i, table in enumerate(tables):
        for m, (s, labels, nu) in enumerate(table.entries, start=1):
            table_data.append([i, m, s, int(labels[s]), '{:.6f}'.format(nu)])
    pcl = ['{}: {}'.format(i, 'yes' if t.pcl else 'no')
           for i, t in enumerate(tables)]
    table_data.append(['pcl', '', '', '', ', '.join(pcl)])
    table = AsciiTable(table_data)
    table.inner_footing_row_border = True
    _emit(table, logger)


def print_sweep_summary(aggregates, logger=None):
    """Print per-(h, metric) mean, median and 10/90% quantiles."""
    header = ['h', 'metric', 'n', 'mean', 'median', 'q10', 'q90']
    table_data = [header]
    for row in aggregates:
        table_data.append([
            row['h'], row['metric'], row['count'],
            '{:.4f}'.format(row['mean']), '{:.4f}'.format(row['median']),
            '{:.4f}'.format(row['q10']), '{:.4f}'.format(row['q90'])
        ])
    _emit(AsciiTable(table_data), logger)


def print_lp_summary(solution, scale=1, logger=None):
    """Print status, objective and basis size of an LP solution."""
    table_data = [['status', 'objective', 'pivots', 'basis']]
    objective = '-' if solution.objective is None else '{:.6f}'.format(
        float(solution.objective))
    table_data.append([
        solution.status, objective, solution.iterations,
        len(solution.basis)
    ])
    if solution.upper_bound is not None:
        table_data.append(
            ['upper bound', '{:.6f}'.format(float(solution.upper_bound)), '',
             ''])
    if scale != 1 and solution.objective is not None:
        table_data.append([
            'total (h={})'.format(scale),
            '{:.6f}'.format(float(solution.objective) * scale), '', ''
        ])
    _emit(AsciiTable(table_data), logger)
