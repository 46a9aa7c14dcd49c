// A row that is both suggested and manually selected shows the selected
// (filled) styling as dominant while the suggestion icon stays visible.

import { describe, expect, it } from 'vitest';

import { loadTraceView } from '../src/traceView.js';
import { StubApi, makeDetail, mount, rowAt } from './helpers.js';

describe('manual-selection precedence', () => {
  it('keeps the suggestion icon on a selected row, with selected style dominant', async () => {
    const { detail, stats } = makeDetail({
      frameCount: 6,
      suggested: [2, 3],
      selected: [1, 2],
    });
    const api = new StubApi(detail, stats);
    const root = mount();
    await loadTraceView(root, api, 'g1');

    const both = rowAt(root, 2); // suggested AND selected
    expect(both.classList.contains('selected')).toBe(true);
    expect(both.classList.contains('suggested')).toBe(true);
    expect(both.querySelector('.suggest-icon:not(.spacer)')).not.toBeNull();
    expect(both.getAttribute('aria-pressed')).toBe('true');
    // The tooltip explanation also survives selection.
    expect(both.querySelector('.tooltip')).not.toBeNull();

    const selectedOnly = rowAt(root, 1);
    expect(selectedOnly.classList.contains('selected')).toBe(true);
    expect(selectedOnly.querySelector('.suggest-icon:not(.spacer)')).toBeNull();

    const suggestedOnly = rowAt(root, 3);
    expect(suggestedOnly.classList.contains('selected')).toBe(false);
    expect(suggestedOnly.classList.contains('suggested')).toBe(true);
    root.remove();
  });

  it('stylesheet gives the selected fill priority over suggestion styling', async () => {
    // jsdom does not cascade external CSS, so assert the contract at the
    // stylesheet level: a .frame-row.selected rule must set a background,
    // and .suggested must not set one that could override it.
    const fs = await import('node:fs');
    const path = await import('node:path');
    const css = fs.readFileSync(path.resolve(process.cwd(), 'styles.css'), 'utf-8');
    const selectedRule = css.match(/\.frame-row\.selected[^{]*\{[^}]*\}/s);
    expect(selectedRule).not.toBeNull();
    expect(selectedRule![0]).toMatch(/background:/);
    const suggestedRules = css.match(/\.frame-row\.suggested[^{]*\{[^}]*\}/gs) ?? [];
    for (const rule of suggestedRules) {
      expect(rule).not.toMatch(/background:/);
    }
  });
});
