// Typed client for the triage service JSON API.

export interface ApiErrorBody {
  status: number;
  code: string;
  message: string;
}

export class ApiError extends Error {
  constructor(readonly body: ApiErrorBody) {
    super(`${body.code}: ${body.message}`);
    this.name = 'ApiError';
  }

  get status(): number {
    return this.body.status;
  }

  get code(): string {
    return this.body.code;
  }
}

export interface FrameRow {
  index: number;
  location: string;
  function: string;
  line?: number;
  subsystem?: string;
  key: string;
}

export interface Suggestion {
  index: number;
  key: string;
  idf: number;
  df: number;
  rank: number;
}

export interface Selection {
  selected_indices: number[];
  updated_at?: string;
  author?: string;
}

export interface GroupSummary {
  group_id: string;
  exception_type: string;
  top_frame_key: string;
  occurrence_count: number;
  first_seen: string;
  last_seen: string;
  has_selection: boolean;
}

export interface GroupList {
  total: number;
  groups: GroupSummary[];
}

export interface GroupDetail {
  group: GroupSummary;
  frames: FrameRow[];
  suggestions: Suggestion[];
  selection: Selection;
}

export interface Stats {
  n_groups: number;
  n_reports: number;
  distinct_frames: number;
}

/** The slice of the API the UI consumes; tests substitute a stub. */
export interface TracelightApi {
  listGroups(limit: number, offset: number): Promise<GroupList>;
  getGroup(groupId: string): Promise<GroupDetail>;
  saveSelection(groupId: string, indices: number[], author?: string): Promise<Selection>;
  getStats(): Promise<Stats>;
}

export class HttpApi implements TracelightApi {
  constructor(private readonly baseUrl: string = '') {}

  private async request<T>(path: string, init?: RequestInit): Promise<T> {
    const resp = await fetch(this.baseUrl + path, {
      headers: { 'Content-Type': 'application/json' },
      ...init,
    });
    if (!resp.ok) {
      throw new ApiError((await resp.json()) as ApiErrorBody);
    }
    return (await resp.json()) as T;
  }

  listGroups(limit: number, offset: number): Promise<GroupList> {
    return this.request(`/api/v1/groups?limit=${limit}&offset=${offset}`);
  }

  getGroup(groupId: string): Promise<GroupDetail> {
    return this.request(`/api/v1/groups/${encodeURIComponent(groupId)}`);
  }

  async saveSelection(groupId: string, indices: number[], author?: string): Promise<Selection> {
    const body = await this.request<{ selection: Selection }>(
      `/api/v1/groups/${encodeURIComponent(groupId)}/selection`,
      {
        method: 'PUT',
        body: JSON.stringify({ selected_indices: indices, author: author ?? null }),
      },
    );
    return body.selection;
  }

  getStats(): Promise<Stats> {
    return this.request('/api/v1/stats');
  }
}
