import { ApiError, type TracelightApi } from './api.js';
import {
  applySelection,
  buildTraceViewModel,
  isDirty,
  selectedIndices,
  suggestionTooltip,
  toggleRow,
  TOOLTIP_EXPLAINER,
  type TraceViewModel,
} from './viewmodel.js';

const AUTHOR_KEY = 'tracelight.author';

export interface TraceViewHandlers {
  onBack?: () => void;
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

function renderRow(vm: TraceViewModel, row: TraceViewModel['rows'][number]): HTMLElement {
  const node = el('div', 'frame-row');
  node.dataset.index = String(row.index);
  node.setAttribute('role', 'button');
  node.tabIndex = 0;
  if (row.suggested) node.classList.add('suggested');
  if (row.selected) node.classList.add('selected');
  node.setAttribute('aria-pressed', String(row.selected));

  // The suggestion icon stays visible even when the row is selected, so
  // the explanation remains reachable; the selected fill dominates it.
  if (row.suggested) {
    const icon = el('span', 'suggest-icon', '!');
    icon.setAttribute('aria-hidden', 'true');
    node.append(icon);
  } else {
    node.append(el('span', 'suggest-icon spacer', ''));
  }

  node.append(el('span', 'frame-index', String(row.index)));
  node.append(el('span', 'frame-text', row.text));
  if (row.subsystem) {
    node.append(el('span', 'subsystem-tag', row.subsystem));
  }

  if (row.suggested) {
    const tooltip = el('div', 'tooltip');
    tooltip.id = `tooltip-${vm.group.group_id}-${row.index}`;
    tooltip.setAttribute('role', 'tooltip');
    tooltip.append(el('div', 'tooltip-reason', suggestionTooltip(row.suggested)));
    tooltip.append(el('div', 'tooltip-explainer', TOOLTIP_EXPLAINER));
    node.setAttribute('aria-describedby', tooltip.id);
    node.append(tooltip);
  }
  return node;
}

export function renderTraceView(
  root: HTMLElement,
  vm: TraceViewModel,
  api: TracelightApi,
  handlers: TraceViewHandlers = {},
): void {
  root.textContent = '';
  const view = el('div', 'trace-view');

  const header = el('div', 'trace-header');
  const back = el('button', 'back-button', '← groups');
  back.addEventListener('click', () => handlers.onBack?.());
  header.append(back);
  header.append(el('h2', 'trace-title', vm.group.exception_type || '(no exception type)'));
  header.append(
    el(
      'span',
      'trace-meta',
      `${vm.group.occurrence_count} reports · last seen ${vm.group.last_seen}`,
    ),
  );
  view.append(header);

  const list = el('div', 'frame-list');
  for (const row of vm.rows) {
    const node = renderRow(vm, row);
    const flip = () => {
      toggleRow(vm, row.index);
      renderTraceView(root, vm, api, handlers); // re-render from the model
    };
    node.addEventListener('click', flip);
    node.addEventListener('keydown', (ev) => {
      if (ev.key === 'Enter' || ev.key === ' ') {
        ev.preventDefault();
        flip();
      }
    });
    list.append(node);
  }
  view.append(list);

  const bar = el('div', 'save-bar');
  const author = el('input', 'author-input') as HTMLInputElement;
  author.placeholder = 'your nickname';
  author.value = localStorage.getItem(AUTHOR_KEY) ?? '';
  author.addEventListener('change', () => localStorage.setItem(AUTHOR_KEY, author.value));
  bar.append(author);

  const save = el('button', 'save-button', 'Save selection') as HTMLButtonElement;
  save.disabled = !isDirty(vm);
  const toastArea = el('div', 'toast-area');
  save.addEventListener('click', async () => {
    if (!isDirty(vm)) return; // no changes, no network call
    try {
      const confirmed = await api.saveSelection(
        vm.group.group_id,
        selectedIndices(vm),
        author.value || undefined,
      );
      applySelection(vm, confirmed);
      renderTraceView(root, vm, api, handlers);
    } catch (err) {
      // Keep the edits; just surface the failure.
      const message = err instanceof ApiError ? err.message : 'save failed: network error';
      toastArea.append(el('div', 'toast error', message));
    }
  });
  bar.append(save);
  bar.append(toastArea);
  view.append(bar);

  root.append(view);
}

export async function loadTraceView(
  root: HTMLElement,
  api: TracelightApi,
  groupId: string,
  handlers: TraceViewHandlers = {},
): Promise<TraceViewModel | null> {
  root.textContent = '';
  try {
    const [detail, stats] = await Promise.all([api.getGroup(groupId), api.getStats()]);
    const vm = buildTraceViewModel(detail, stats.n_groups);
    renderTraceView(root, vm, api, handlers);
    return vm;
  } catch (err) {
    if (err instanceof ApiError && err.status === 404) {
      const missing = el('div', 'not-found');
      missing.append(el('h2', undefined, 'Group not found'));
      missing.append(el('p', undefined, `No trace group with id ${groupId}.`));
      const back = el('button', 'back-button', '← groups');
      back.addEventListener('click', () => handlers.onBack?.());
      missing.append(back);
      root.append(missing);
      return null;
    }
    root.append(el('div', 'banner offline', 'Service unreachable; showing nothing.'));
    return null;
  }
}
