import type { TracelightApi } from './api.js';

const PAGE_SIZE = 50;

export interface GroupListHandlers {
  onOpen: (groupId: string) => void;
}

function el<K extends keyof HTMLElementTagNameMap>(
  tag: K,
  className?: string,
  text?: string,
): HTMLElementTagNameMap[K] {
  const node = document.createElement(tag);
  if (className) node.className = className;
  if (text !== undefined) node.textContent = text;
  return node;
}

export async function renderGroupList(
  root: HTMLElement,
  api: TracelightApi,
  handlers: GroupListHandlers,
  page = 0,
): Promise<void> {
  root.textContent = '';
  const view = el('div', 'group-list');
  view.append(el('h2', 'list-title', 'Trace groups'));

  let data;
  try {
    data = await api.listGroups(PAGE_SIZE, page * PAGE_SIZE);
  } catch {
    const banner = el('div', 'banner offline', 'Service unreachable.');
    const retry = el('button', 'retry-button', 'Retry');
    retry.addEventListener('click', () => void renderGroupList(root, api, handlers, page));
    banner.append(retry);
    view.append(banner);
    root.append(view);
    return;
  }

  if (data.total === 0) {
    view.append(el('div', 'empty-state', 'No trace groups yet. Ingest some reports first.'));
    root.append(view);
    return;
  }

  const rows = el('div', 'group-rows');
  for (const group of data.groups) {
    const row = el('div', 'group-row');
    row.setAttribute('role', 'button');
    row.tabIndex = 0;
    row.dataset.groupId = group.group_id;
    row.append(el('span', 'group-exception', group.exception_type || '(unknown)'));
    row.append(el('span', 'group-topframe', group.top_frame_key));
    row.append(el('span', 'group-count', `×${group.occurrence_count}`));
    row.append(el('span', 'group-seen', group.last_seen));
    if (group.has_selection) {
      row.append(el('span', 'badge triaged', 'triaged'));
    }
    const open = () => handlers.onOpen(group.group_id);
    row.addEventListener('click', open);
    row.addEventListener('keydown', (ev) => {
      if (ev.key === 'Enter' || ev.key === ' ') {
        ev.preventDefault();
        open();
      }
    });
    rows.append(row);
  }
  view.append(rows);

  const pager = el('div', 'pager');
  const prev = el('button', 'pager-prev', 'newer') as HTMLButtonElement;
  prev.disabled = page === 0;
  prev.addEventListener('click', () => void renderGroupList(root, api, handlers, page - 1));
  const next = el('button', 'pager-next', 'older') as HTMLButtonElement;
  next.disabled = (page + 1) * PAGE_SIZE >= data.total;
  next.addEventListener('click', () => void renderGroupList(root, api, handlers, page + 1));
  pager.append(prev, el('span', 'pager-label', `page ${page + 1}`), next);
  view.append(pager);

  root.append(view);
}
