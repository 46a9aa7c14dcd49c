import { beforeEach, describe, expect, it } from 'vitest';

import { loadTraceView } from '../src/traceView.js';
import {
  StubApi,
  makeDetail,
  mount,
  rowAt,
  selectedRows,
  settle,
} from './helpers.js';

function saveButton(root: HTMLElement): HTMLButtonElement {
  return root.querySelector('.save-button') as HTMLButtonElement;
}

describe('trace view interactions', () => {
  beforeEach(() => {
    localStorage.clear();
    document.body.textContent = '';
  });

  it('toggling rows 1 and 2 and saving PUTs the full index set', async () => {
    const { detail, stats } = makeDetail({ frameCount: 6, suggested: [2, 3] });
    const api = new StubApi(detail, stats);
    const root = mount();
    await loadTraceView(root, api, 'g1');

    rowAt(root, 1).click();
    rowAt(root, 2).click();
    expect(selectedRows(root).sort()).toEqual([1, 2]);

    saveButton(root).click();
    await settle();
    expect(api.saveCalls).toEqual([{ groupId: 'g1', indices: [1, 2], author: undefined }]);
    // Dirty flag cleared: button disabled again, rows reflect server state.
    expect(saveButton(root).disabled).toBe(true);
    expect(selectedRows(root).sort()).toEqual([1, 2]);
  });

  it('save with no changes issues no network call', async () => {
    const { detail, stats } = makeDetail({ frameCount: 4, selected: [0] });
    const api = new StubApi(detail, stats);
    const root = mount();
    await loadTraceView(root, api, 'g1');

    expect(saveButton(root).disabled).toBe(true);
    saveButton(root).click();
    await settle();
    expect(api.saveCalls).toEqual([]);
  });

  it('toggling back to the baseline clears the dirty flag', async () => {
    const { detail, stats } = makeDetail({ frameCount: 4, selected: [1] });
    const api = new StubApi(detail, stats);
    const root = mount();
    await loadTraceView(root, api, 'g1');

    rowAt(root, 1).click(); // deselect
    expect(saveButton(root).disabled).toBe(false);
    rowAt(root, 1).click(); // reselect: back to saved state
    expect(saveButton(root).disabled).toBe(true);
  });

  it('failed save shows an error toast and keeps the edits', async () => {
    const { detail, stats } = makeDetail({ frameCount: 4 });
    const api = new StubApi(detail, stats);
    api.failSave = true;
    const root = mount();
    await loadTraceView(root, api, 'g1');

    rowAt(root, 0).click();
    saveButton(root).click();
    await settle();
    expect(root.querySelector('.toast.error')).not.toBeNull();
    expect(selectedRows(root)).toEqual([0]);
    expect(saveButton(root).disabled).toBe(false); // still dirty
  });

  it('re-renders from the server response after a successful save', async () => {
    const { detail, stats } = makeDetail({ frameCount: 4 });
    const api = new StubApi(detail, stats);
    // Server normalizes to a different set (e.g. another writer won).
    api.saveSelection = async (groupId, indices, author) => {
      api.saveCalls.push({ groupId, indices, author });
      return { selected_indices: [3], updated_at: 'now' };
    };
    const root = mount();
    await loadTraceView(root, api, 'g1');
    rowAt(root, 0).click();
    saveButton(root).click();
    await settle();
    expect(selectedRows(root)).toEqual([3]);
  });

  it('explains suggestions in a tooltip reachable from keyboard focus', async () => {
    const { detail, stats } = makeDetail({ frameCount: 6, suggested: [1], nGroups: 120 });
    detail.suggestions[0].df = 1;
    const api = new StubApi(detail, stats);
    const root = mount();
    await loadTraceView(root, api, 'g1');

    const suggested = rowAt(root, 1);
    const tooltip = suggested.querySelector('.tooltip') as HTMLElement;
    expect(tooltip).not.toBeNull();
    expect(tooltip.textContent).toContain('1 of 120');
    expect(tooltip.textContent).toContain('rank 1');
    expect(tooltip.querySelector('.tooltip-explainer')?.textContent).toBeTruthy();
    // Keyboard accessibility: the row is focusable and described by the tooltip.
    expect(suggested.tabIndex).toBe(0);
    expect(suggested.getAttribute('aria-describedby')).toBe(tooltip.id);

    expect(rowAt(root, 0).querySelector('.tooltip')).toBeNull();
  });

  it('shows a not-found view for an unknown group', async () => {
    const api = new StubApi();
    const root = mount();
    await loadTraceView(root, api, 'missing');
    expect(root.querySelector('.not-found')?.textContent).toContain('Group not found');
  });

  it('remembers the author nickname in local storage', async () => {
    const { detail, stats } = makeDetail({ frameCount: 4 });
    const api = new StubApi(detail, stats);
    const root = mount();
    await loadTraceView(root, api, 'g1');

    const input = root.querySelector('.author-input') as HTMLInputElement;
    input.value = 'alice';
    input.dispatchEvent(new Event('change'));
    rowAt(root, 2).click();
    saveButton(root).click();
    await settle();
    expect(api.saveCalls[0].author).toBe('alice');
    expect(localStorage.getItem('tracelight.author')).toBe('alice');
  });
});
