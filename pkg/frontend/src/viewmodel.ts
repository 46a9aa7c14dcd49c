import type { FrameRow, GroupDetail, GroupSummary, Selection } from './api.js';

export interface SuggestedInfo {
  rank: number;
  idf: number;
  df: number;
  n: number;
}

export interface TraceRow {
  index: number;
  text: string;
  subsystem?: string;
  suggested?: SuggestedInfo;
  selected: boolean;
}

export interface TraceViewModel {
  group: GroupSummary;
  rows: TraceRow[];
  /** Last server-confirmed selection, for dirty tracking. */
  baseline: number[];
}

export function frameText(frame: FrameRow): string {
  const line = frame.line != null ? `:${frame.line}` : '';
  return `${frame.function} at ${frame.location}${line}`;
}

export function buildTraceViewModel(detail: GroupDetail, nGroups: number): TraceViewModel {
  const byIndex = new Map(detail.suggestions.map((s) => [s.index, s]));
  const selected = new Set(detail.selection.selected_indices);
  const rows = detail.frames.map((frame) => {
    const suggestion = byIndex.get(frame.index);
    const row: TraceRow = {
      index: frame.index,
      text: frameText(frame),
      selected: selected.has(frame.index),
    };
    if (frame.subsystem !== undefined) row.subsystem = frame.subsystem;
    if (suggestion) {
      row.suggested = {
        rank: suggestion.rank,
        idf: suggestion.idf,
        df: suggestion.df,
        n: nGroups,
      };
    }
    return row;
  });
  return {
    group: detail.group,
    rows,
    baseline: [...detail.selection.selected_indices].sort((a, b) => a - b),
  };
}

export function toggleRow(vm: TraceViewModel, index: number): void {
  const row = vm.rows.find((r) => r.index === index);
  if (row) row.selected = !row.selected;
}

export function selectedIndices(vm: TraceViewModel): number[] {
  return vm.rows.filter((r) => r.selected).map((r) => r.index).sort((a, b) => a - b);
}

export function isDirty(vm: TraceViewModel): boolean {
  const current = selectedIndices(vm);
  return (
    current.length !== vm.baseline.length ||
    current.some((v, i) => v !== vm.baseline[i])
  );
}

/** Adopt the server's confirmed selection (after a successful save). */
export function applySelection(vm: TraceViewModel, selection: Selection): void {
  const confirmed = new Set(selection.selected_indices);
  for (const row of vm.rows) row.selected = confirmed.has(row.index);
  vm.baseline = [...selection.selected_indices].sort((a, b) => a - b);
}

export function suggestionTooltip(info: SuggestedInfo): string {
  return (
    `Suggested: rare frame — appears in ${info.df} of ${info.n} known issue groups ` +
    `(rank ${info.rank})`
  );
}

/** One static sentence shown under every suggestion tooltip. */
export const TOOLTIP_EXPLAINER =
  'Frames that are rare across all known issues usually carry the most specific clue, so the rarest ones are pre-highlighted.';
