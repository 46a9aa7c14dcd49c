import type {
  FrameRow,
  GroupDetail,
  GroupList,
  GroupSummary,
  Selection,
  Stats,
  TracelightApi,
} from '../src/api.js';

export function makeGroup(id: string, overrides: Partial<GroupSummary> = {}): GroupSummary {
  return {
    group_id: id,
    exception_type: 'java.io.IOException',
    top_frame_key: 'com.example.Foo.bar',
    occurrence_count: 4,
    first_seen: '2026-01-01T00:00:00Z',
    last_seen: '2026-01-02T00:00:00Z',
    has_selection: false,
    ...overrides,
  };
}

export interface DetailSpec {
  id?: string;
  frameCount?: number;
  suggested?: number[]; // indices, rank order
  selected?: number[];
  subsystems?: Record<number, string>;
  nGroups?: number;
}

export function makeDetail(spec: DetailSpec = {}): { detail: GroupDetail; stats: Stats } {
  const id = spec.id ?? 'g1';
  const frameCount = spec.frameCount ?? 6;
  const suggested = spec.suggested ?? [1, 3];
  const selected = spec.selected ?? [];
  const frames: FrameRow[] = [];
  for (let i = 0; i < frameCount; i++) {
    const frame: FrameRow = {
      index: i,
      location: `com.example.C${i}`,
      function: `m${i}`,
      line: 10 + i,
      key: `com.example.C${i}.m${i}`,
    };
    const subsystem = spec.subsystems?.[i];
    if (subsystem) frame.subsystem = subsystem;
    frames.push(frame);
  }
  const detail: GroupDetail = {
    group: makeGroup(id, { has_selection: selected.length > 0 }),
    frames,
    suggestions: suggested.map((index, i) => ({
      index,
      key: frames[index].key,
      idf: 3.0 - i * 0.5,
      df: i + 1,
      rank: i + 1,
    })),
    selection: { selected_indices: selected },
  };
  return { detail, stats: { n_groups: spec.nGroups ?? 120, n_reports: 500, distinct_frames: 64 } };
}

export class StubApi implements TracelightApi {
  detail: GroupDetail;
  stats: Stats;
  list: GroupList = { total: 0, groups: [] };
  saveCalls: Array<{ groupId: string; indices: number[]; author?: string }> = [];
  failSave = false;
  failList = false;

  constructor(detail?: GroupDetail, stats?: Stats) {
    const fallback = makeDetail();
    this.detail = detail ?? fallback.detail;
    this.stats = stats ?? fallback.stats;
  }

  async listGroups(): Promise<GroupList> {
    if (this.failList) throw new Error('connection refused');
    return this.list;
  }

  async getGroup(groupId: string): Promise<GroupDetail> {
    if (groupId !== this.detail.group.group_id) {
      const { ApiError } = await import('../src/api.js');
      throw new ApiError({ status: 404, code: 'unknown_group', message: `no group ${groupId}` });
    }
    return this.detail;
  }

  async saveSelection(groupId: string, indices: number[], author?: string): Promise<Selection> {
    if (this.failSave) throw new Error('connection refused');
    this.saveCalls.push({ groupId, indices, author });
    this.detail.selection = { selected_indices: indices, updated_at: 'now', author };
    return this.detail.selection;
  }

  async getStats(): Promise<Stats> {
    return this.stats;
  }
}

export function mount(): HTMLElement {
  const root = document.createElement('div');
  document.body.append(root);
  return root;
}

export function rowAt(root: HTMLElement, index: number): HTMLElement {
  const row = root.querySelector<HTMLElement>(`.frame-row[data-index="${index}"]`);
  if (!row) throw new Error(`no frame row ${index}`);
  return row;
}

export function boldIconRows(root: HTMLElement): number[] {
  // "Rendered as suggested" = the suggested (bold) class plus a visible icon.
  return [...root.querySelectorAll<HTMLElement>('.frame-row')]
    .filter(
      (row) =>
        row.classList.contains('suggested') &&
        row.querySelector('.suggest-icon:not(.spacer)') !== null,
    )
    .map((row) => Number(row.dataset.index));
}

export function selectedRows(root: HTMLElement): number[] {
  return [...root.querySelectorAll<HTMLElement>('.frame-row.selected')].map((row) =>
    Number(row.dataset.index),
  );
}

export async function settle(): Promise<void> {
  await new Promise((resolve) => setTimeout(resolve, 0));
}
